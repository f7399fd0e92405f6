#pragma once

// umbrella header

#include "pell/nt.hpp"
#include "pell/ring.hpp"
#include "pell/conic.hpp"
#include "pell/modular.hpp"
#include "pell/primality.hpp"
#include "pell/factor.hpp"
#include "pell/forms.hpp"
#include "pell/descent.hpp"
#include "pell/heights.hpp"
#include "pell/analytic.hpp"
