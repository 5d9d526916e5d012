#ifndef WH_WH_HPP
#define WH_WH_HPP

#include "analysis.hpp"
#include "boundary.hpp"
#include "direct.hpp"
#include "eig.hpp"
#include "extension.hpp"
#include "filter.hpp"
#include "grid.hpp"
#include "krylov.hpp"
#include "laplacian.hpp"
#include "modfreq.hpp"
#include "timestep.hpp"
#include "waveholtz.hpp"

#endif
