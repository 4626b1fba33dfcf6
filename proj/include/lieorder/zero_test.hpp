#pragma once

#include "lieorder/expr.hpp"

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace lieorder {

/// Parameters of the simplify-then-sample identity test.
struct ZeroTestPolicy {
  int sample_count = 32;
  double box_halfwidth = 1.0;
  double tolerance = 1e-9;
  std::uint64_t seed = 0x6c69656f72646572ULL;

  /// Throws std::invalid_argument on non-positive count, width or tolerance.
  void validate() const;

  /// Same policy with an independent seed mixed from `keys`, so that
  /// parallel or reordered tests stay reproducible.
  ZeroTestPolicy derive(std::initializer_list<std::uint64_t> keys) const;
};

struct ZeroVerdict {
  bool zero = true;
  /// Decided by simplification alone, no sampling performed.
  bool syntactic = false;
  /// For a nonzero verdict: the sample point and the value found there.
  Binding witness;
  double value = 0.0;
};

/// `zero` iff simplify(e) is the constant 0, or |e| <= tolerance at every
/// sampled point of [-b, b]^vars. A nonzero verdict is certain; a zero
/// verdict can be wrong with small probability. Sample points where
/// evaluation fails are redrawn; IndeterminateError if none succeed.
ZeroVerdict is_zero(const Expr& e, const ZeroTestPolicy& policy = {});

/// As above but samples over `sample_vars`, which must cover the variables
/// of `e`. Fields use this to test every component over the same space.
ZeroVerdict is_zero(const Expr& e, std::span<const std::string> sample_vars,
                    const ZeroTestPolicy& policy);

/// Uniform double in [lo, hi) from a 64-bit generator, portable across
/// standard library implementations.
double uniform_from_bits(std::uint64_t bits, double lo, double hi);

}  // namespace lieorder
