#pragma once

#include "perpetua/bernstein.hpp"
#include "perpetua/catalog.hpp"
#include "perpetua/conjugacy.hpp"
#include "perpetua/errors.hpp"
#include "perpetua/kappa_analysis.hpp"
#include "perpetua/measures.hpp"
#include "perpetua/mellin.hpp"
#include "perpetua/montecarlo.hpp"
#include "perpetua/quadrature.hpp"
#include "perpetua/serialize.hpp"
#include "perpetua/special.hpp"
