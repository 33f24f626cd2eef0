#pragma once

#include "gkmean/coefficient.hpp"
#include "gkmean/errors.hpp"
#include "gkmean/exponential_sum.hpp"
#include "gkmean/frequency.hpp"
#include "gkmean/gkformula.hpp"
#include "gkmean/laurent.hpp"
#include "gkmean/rational.hpp"
#include "gkmean/verifier.hpp"
#include "gkmean/zerofinder.hpp"
