#pragma once

#include "mirrorgas/angles.hpp"
#include "mirrorgas/asymptotics.hpp"
#include "mirrorgas/io.hpp"
#include "mirrorgas/kernels.hpp"
#include "mirrorgas/lemmas.hpp"
#include "mirrorgas/log_complex.hpp"
#include "mirrorgas/model.hpp"
#include "mirrorgas/oracle.hpp"
#include "mirrorgas/quadrature.hpp"
#include "mirrorgas/rng.hpp"
#include "mirrorgas/sampler.hpp"
#include "mirrorgas/stats.hpp"
#include "mirrorgas/trig_poly.hpp"
