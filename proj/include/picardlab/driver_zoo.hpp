#pragma once

#include "picardlab/linear_example.hpp"
#include "picardlab/nested_picard.hpp"

namespace picardlab {

/// f(t,y,z) = <b, z>, terminal 2^{d/2} exp(-|x|^2/2): the linear example
/// as a generic Markovian BSDE (value dimension 1, noise dimension d).
GenericBsde make_linear_z_problem(const LinearExampleSpec& spec);

/// f(t,y,z) = lip_y * y, terminal 1, one-dimensional; the iterates are
/// partial exponential sums.
GenericBsde make_linear_y_problem(double lip_y, double horizon = 1.0);

/// f = 0 with the linear-example terminal; every iterate beyond the first
/// equals the conditional terminal expectation.
GenericBsde make_zero_driver_problem(const LinearExampleSpec& spec);

}  // namespace picardlab
