#pragma once

#include "hypgeo/glueing.hpp"
#include "hypgeo/hyperboloid.hpp"
#include "hypgeo/io.hpp"
#include "hypgeo/lp.hpp"
#include "hypgeo/matrix.hpp"
#include "hypgeo/numfield.hpp"
#include "hypgeo/qforms.hpp"
#include "hypgeo/svg.hpp"
#include "hypgeo/voronoi.hpp"
#include "hypgeo/voronoi_scenes.hpp"
