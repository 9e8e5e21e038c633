#pragma once

#include "geospectral/dense.hpp"
#include "geospectral/eigensolve.hpp"
#include "geospectral/errors.hpp"
#include "geospectral/geoalg.hpp"
#include "geospectral/realdecomp.hpp"
