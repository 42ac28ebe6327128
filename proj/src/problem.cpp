#include "ptspec/problem.hpp"

#include "ptspec/error.hpp"

namespace ptspec {

namespace {

PotentialOptions with_frequencies(PotentialOptions o, const FrequencyVector& f) {
  o.mode_frequencies.clear();
  for (int k = 0; k < f.d(); ++k) o.mode_frequencies.push_back(f.frequency(k));
  return o;
}

}  // namespace

AssembledProblem::AssembledProblem(FrequencyVector freqs, PotentialSpec potential, int n_max,
                                   PotentialOptions options)
    : freqs_(std::move(freqs)),
      potential_(std::move(potential)),
      options_(with_frequencies(std::move(options), freqs_)),
      basis_(freqs_.d(), n_max),
      levels_(h0_levels(freqs_, basis_)),
      h0_(build_h0(freqs_, basis_)),
      w_(potential_matrix(basis_, potential_, options_)),
      v_(Complex(0.0, 1.0) * w_.matrix.entries()) {}

OperatorMatrix AssembledProblem::h(double g) const { return assemble_h(g, h0_, w_.matrix); }

AssembledProblem AssembledProblem::with_n_max(int n_max) const {
  PotentialOptions o = options_;
  o.quad_order = 0;
  return AssembledProblem(freqs_, potential_, n_max, o);
}

}  // namespace ptspec
