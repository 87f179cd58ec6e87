#pragma once

#include "rze/compensated_sum.hpp"
#include "rze/descriptors.hpp"
#include "rze/elementary_factors.hpp"
#include "rze/error.hpp"
#include "rze/io.hpp"
#include "rze/monte_carlo.hpp"
#include "rze/point_process.hpp"
#include "rze/rng.hpp"
#include "rze/scaled_complex.hpp"
#include "rze/weierstrass_product.hpp"
#include "rze/zero_verification.hpp"
