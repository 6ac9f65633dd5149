#include "cli.hpp"

int main(int argc, char** argv) { return perpetua::cli::run(argc, argv); }
