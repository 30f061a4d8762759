#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "langspin/error.hpp"
#include "langspin/graph.hpp"

namespace langspin {

using Spin = std::int8_t;

/// A syntactic parameter. Binary parameters take {-1,+1}; ternary ones add 0 ("undefined").
struct ParameterSpec {
  std::string id;
  int arity = 2;

  static ParameterSpec binary(std::string id) { return {std::move(id), 2}; }
  static ParameterSpec ternary(std::string id) { return {std::move(id), 3}; }

  bool allows(int value) const {
    if (value == -1 || value == 1) return true;
    return arity == 3 && value == 0;
  }

  /// Allowed values in cycle order (-1 -> 0 -> +1 -> -1 for ternary).
  std::vector<Spin> values() const {
    if (arity == 3) return {-1, 0, 1};
    return {-1, 1};
  }

  friend bool operator==(const ParameterSpec&, const ParameterSpec&) = default;
};

inline void require_valid_arity(const ParameterSpec& p) {
  if (p.arity != 2 && p.arity != 3) {
    throw Error(ErrorCode::ArityMismatch, "parameter '" + p.id + "' has arity " + std::to_string(p.arity));
  }
}

/// Total assignment of spins to every (language, parameter) pair.
/// Stored parameter-major so each parameter's spins form a contiguous row.
class SpinConfiguration {
 public:
  SpinConfiguration() = default;

  /// All binary spins start at +1; ternary spins start at 0.
  SpinConfiguration(std::vector<ParameterSpec> params, std::size_t languages)
      : params_(std::move(params)), languages_(languages) {
    for (const auto& p : params_) require_valid_arity(p);
    values_.reserve(params_.size() * languages_);
    for (const auto& p : params_) values_.insert(values_.end(), languages_, p.arity == 3 ? 0 : 1);
  }

  std::size_t language_count() const noexcept { return languages_; }
  std::size_t parameter_count() const noexcept { return params_.size(); }
  std::span<const ParameterSpec> parameters() const noexcept { return params_; }
  const ParameterSpec& parameter(std::size_t p) const { return params_.at(p); }

  std::size_t index_of(const ParameterSpec& p) const {
    for (std::size_t i = 0; i < params_.size(); ++i) {
      if (params_[i].id == p.id) {
        if (params_[i].arity != p.arity) {
          throw Error(ErrorCode::ArityMismatch, "parameter '" + p.id + "' arity differs from configuration");
        }
        return i;
      }
    }
    throw Error(ErrorCode::InvalidArgument, "configuration has no parameter '" + p.id + "'");
  }

  Spin get(LanguageId l, std::size_t p) const { return values_.at(offset(l, p)); }
  Spin get(LanguageId l, const ParameterSpec& p) const { return get(l, index_of(p)); }

  void set(LanguageId l, std::size_t p, int value) {
    const auto at = offset(l, p);
    if (!params_[p].allows(value)) {
      throw Error(ErrorCode::InvalidSpin, "value " + std::to_string(value) + " not allowed for '" + params_[p].id + "'");
    }
    values_[at] = static_cast<Spin>(value);
  }
  void set(LanguageId l, const ParameterSpec& p, int value) { set(l, index_of(p), value); }

  std::span<const Spin> row(std::size_t p) const {
    check_param(p);
    return std::span<const Spin>(values_).subspan(p * languages_, languages_);
  }
  /// Mutable row access for samplers. Callers keep values inside the allowed set.
  std::span<Spin> mutable_row(std::size_t p) {
    check_param(p);
    return std::span<Spin>(values_).subspan(p * languages_, languages_);
  }

  /// Throws InvalidSpin if any stored value lies outside its parameter's allowed set.
  void validate() const {
    for (std::size_t p = 0; p < params_.size(); ++p) {
      for (std::size_t l = 0; l < languages_; ++l) {
        if (!params_[p].allows(values_[p * languages_ + l])) {
          throw Error(ErrorCode::InvalidSpin, "language " + std::to_string(l) + " parameter '" + params_[p].id + "'");
        }
      }
    }
  }

  friend bool operator==(const SpinConfiguration&, const SpinConfiguration&) = default;

 private:
  void check_param(std::size_t p) const {
    if (p >= params_.size()) throw Error(ErrorCode::InvalidArgument, "parameter index out of range");
  }
  std::size_t offset(LanguageId l, std::size_t p) const {
    check_param(p);
    if (l.index >= languages_) throw Error(ErrorCode::UnknownLanguage, "language index out of range");
    return p * languages_ + l.index;
  }

  std::vector<ParameterSpec> params_;
  std::size_t languages_ = 0;
  std::vector<Spin> values_;
};

}  // namespace langspin
