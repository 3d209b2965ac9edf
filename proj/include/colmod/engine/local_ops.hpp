#pragma once

#include <cstddef>

#include "colmod/core/errors.hpp"
#include "colmod/core/types.hpp"

// Kernels acting on two factors of a register laid out as [A, middle..., last],
// all without forming d^n x d^n operators on the full register.

namespace colmod::local {

/// Apply `f` to every d^2 x d^2 block of `x` that couples the first and last
/// factors, with the middle indices (row and column) held fixed. The block
/// index (a, b) is a*d + b: system slow, last factor fast.
template <class Fn>
void for_each_edge_block(Operator& x, std::size_t d, Fn&& f) {
  const auto dd = static_cast<Eigen::Index>(d);
  const Eigen::Index n = x.rows();
  if (n % (dd * dd) != 0) throw DimensionError("edge block: register not divisible by d^2");
  const Eigen::Index mid = n / (dd * dd);
  const Eigen::Index stride_a = mid * dd;
  Operator y(dd * dd, dd * dd);
  auto index = [&](Eigen::Index a, Eigen::Index m, Eigen::Index b) { return a * stride_a + m * dd + b; };
  for (Eigen::Index mc = 0; mc < mid; ++mc) {
    for (Eigen::Index mr = 0; mr < mid; ++mr) {
      for (Eigen::Index ac = 0; ac < dd; ++ac)
        for (Eigen::Index bc = 0; bc < dd; ++bc)
          for (Eigen::Index ar = 0; ar < dd; ++ar)
            for (Eigen::Index br = 0; br < dd; ++br)
              y(ar * dd + br, ac * dd + bc) = x(index(ar, mr, br), index(ac, mc, bc));
      f(y);
      for (Eigen::Index ac = 0; ac < dd; ++ac)
        for (Eigen::Index bc = 0; bc < dd; ++bc)
          for (Eigen::Index ar = 0; ar < dd; ++ar)
            for (Eigen::Index br = 0; br < dd; ++br)
              x(index(ar, mr, br), index(ac, mc, bc)) = y(ar * dd + br, ac * dd + bc);
    }
  }
}

/// x -> U x U^dagger with U acting on (first, last).
inline void conjugate_edge(Operator& x, const Operator& u, std::size_t d) {
  const Operator ud = u.adjoint();
  Operator tmp(u.rows(), u.cols());
  for_each_edge_block(x, d, [&](Operator& y) {
    tmp.noalias() = u * y;
    y.noalias() = tmp * ud;
  });
}

/// x -> x + i*k*(S x - x S) with S the swap of (first, last).
inline void add_swap_commutator(Operator& x, std::size_t d, Complex k) {
  const auto dd = static_cast<Eigen::Index>(d);
  Operator sy(dd * dd, dd * dd);
  for_each_edge_block(x, d, [&](Operator& y) {
    // (S y)[(a,b),c] = y[(b,a),c];  (y S)[r,(a,b)] = y[r,(b,a)]
    for (Eigen::Index c = 0; c < dd * dd; ++c)
      for (Eigen::Index a = 0; a < dd; ++a)
        for (Eigen::Index b = 0; b < dd; ++b) sy(a * dd + b, c) = y(b * dd + a, c);
    for (Eigen::Index a = 0; a < dd; ++a)
      for (Eigen::Index b = 0; b < dd; ++b)
        for (Eigen::Index r = 0; r < dd * dd; ++r) sy(r, a * dd + b) -= y(r, b * dd + a);
    y += k * sy;
  });
}

/// Moves the first factor of `x` (dim d) to the last position:
/// [A, b1..bn] -> [b1..bn, A].
inline Operator rotate_first_to_last(const Operator& x, std::size_t d) {
  const auto dd = static_cast<Eigen::Index>(d);
  const Eigen::Index n = x.rows();
  const Eigen::Index rest = n / dd;
  Operator out(n, n);
  for (Eigen::Index ac = 0; ac < dd; ++ac)
    for (Eigen::Index mc = 0; mc < rest; ++mc)
      for (Eigen::Index ar = 0; ar < dd; ++ar)
        for (Eigen::Index mr = 0; mr < rest; ++mr) out(mr * dd + ar, mc * dd + ac) = x(ar * rest + mr, ac * rest + mc);
  return out;
}

/// Tr over the first factor (dim d): returns the operator on the remaining factors.
inline Operator trace_first(const Operator& x, std::size_t d) {
  const auto dd = static_cast<Eigen::Index>(d);
  const Eigen::Index rest = x.rows() / dd;
  Operator out = Operator::Zero(rest, rest);
  for (Eigen::Index a = 0; a < dd; ++a) out += x.block(a * rest, a * rest, rest, rest);
  return out;
}

}  // namespace colmod::local
