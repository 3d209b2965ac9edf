#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "colmod/core/errors.hpp"

namespace colmod {

/// Identifies one tensor factor: the system, or the k-th ancilla (1-based,
/// in collision order).
struct FactorLabel {
  enum class Kind { kSystem, kAncilla };

  Kind kind = Kind::kSystem;
  std::size_t index = 0;

  static constexpr FactorLabel system() { return {Kind::kSystem, 0}; }
  static constexpr FactorLabel ancilla(std::size_t k) { return {Kind::kAncilla, k}; }

  friend constexpr auto operator<=>(const FactorLabel&, const FactorLabel&) = default;

  std::string to_string() const {
    return kind == Kind::kSystem ? std::string("A") : "b" + std::to_string(index);
  }
};

/// Ordered list of local dimensions with their labels. The first factor is
/// the slowest-varying index of the composite basis.
class TensorLayout {
 public:
  TensorLayout() = default;

  TensorLayout(std::vector<std::size_t> dims, std::vector<FactorLabel> labels)
      : dims_(std::move(dims)), labels_(std::move(labels)) {
    if (dims_.size() != labels_.size()) {
      throw LabelError("TensorLayout: dims and labels differ in length");
    }
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (dims_[i] == 0) throw DimensionError("TensorLayout: zero local dimension");
      for (std::size_t j = 0; j < i; ++j) {
        if (labels_[j] == labels_[i]) {
          throw LabelError("TensorLayout: duplicate label " + labels_[i].to_string());
        }
      }
    }
  }

  /// Layout [A, b1, ..., bn] with every factor of dimension local_dim.
  static TensorLayout system_with_ancillas(std::size_t local_dim, std::size_t n_ancillas) {
    TensorLayout layout({local_dim}, {FactorLabel::system()});
    for (std::size_t k = 1; k <= n_ancillas; ++k) layout.append(FactorLabel::ancilla(k), local_dim);
    return layout;
  }

  void append(FactorLabel label, std::size_t dim) {
    if (contains(label)) throw LabelError("TensorLayout: duplicate label " + label.to_string());
    if (dim == 0) throw DimensionError("TensorLayout: zero local dimension");
    dims_.push_back(dim);
    labels_.push_back(label);
  }

  std::size_t size() const noexcept { return dims_.size(); }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  const std::vector<FactorLabel>& labels() const noexcept { return labels_; }

  std::size_t total_dim() const noexcept {
    std::size_t d = 1;
    for (auto x : dims_) d *= x;
    return d;
  }

  bool contains(const FactorLabel& label) const noexcept {
    for (const auto& l : labels_) {
      if (l == label) return true;
    }
    return false;
  }

  std::size_t position_of(const FactorLabel& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i] == label) return i;
    }
    throw LabelError("unknown factor label " + label.to_string());
  }

  /// Sub-layout over `keep`, in this layout's order.
  TensorLayout restricted_to(const std::vector<FactorLabel>& keep) const {
    for (const auto& k : keep) position_of(k);
    TensorLayout out;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      for (const auto& k : keep) {
        if (k == labels_[i]) {
          out.append(labels_[i], dims_[i]);
          break;
        }
      }
    }
    return out;
  }

  /// Labels not in `subset`, in layout order.
  std::vector<FactorLabel> complement(const std::vector<FactorLabel>& subset) const {
    std::vector<FactorLabel> out;
    for (const auto& l : labels_) {
      bool found = false;
      for (const auto& s : subset) found = found || (s == l);
      if (!found) out.push_back(l);
    }
    return out;
  }

 private:
  std::vector<std::size_t> dims_;
  std::vector<FactorLabel> labels_;
};

}  // namespace colmod
