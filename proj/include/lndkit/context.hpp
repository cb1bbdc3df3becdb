#pragma once

#include <algorithm>
#include <cctype>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lndkit/errors.hpp"

namespace lndkit {

/// Variable layout shared by a family of polynomials.
///
/// Variables are indexed main variables first, then coefficient variables.
/// That index order is also the lex significance order used for canonical
/// term ordering, so "X^2*t" sorts by X before t.
class VarContext {
 public:
  VarContext() : data_(empty_data()) {}

  static VarContext make(std::vector<std::string> coeff_vars, std::vector<std::string> main_vars) {
    auto data = std::make_shared<Data>();
    data->coeff = std::move(coeff_vars);
    data->main = std::move(main_vars);
    data->names = data->main;
    data->names.insert(data->names.end(), data->coeff.begin(), data->coeff.end());
    std::set<std::string> seen;
    for (const auto& n : data->names) {
      if (!valid_name(n)) throw StructuralError("invalid variable name '" + n + "'");
      if (!seen.insert(n).second) throw StructuralError("duplicate variable name '" + n + "'");
    }
    return VarContext(std::move(data));
  }

  std::size_t size() const noexcept { return data_->names.size(); }
  std::size_t num_main() const noexcept { return data_->main.size(); }
  std::size_t num_coeff() const noexcept { return data_->coeff.size(); }

  const std::vector<std::string>& main_vars() const noexcept { return data_->main; }
  const std::vector<std::string>& coeff_vars() const noexcept { return data_->coeff; }
  const std::vector<std::string>& names() const noexcept { return data_->names; }
  const std::string& name(std::size_t i) const { return data_->names.at(i); }

  bool is_main(std::size_t i) const noexcept { return i < data_->main.size(); }

  std::optional<std::size_t> index_of(std::string_view name) const {
    const auto& n = data_->names;
    auto it = std::find(n.begin(), n.end(), name);
    if (it == n.end()) return std::nullopt;
    return static_cast<std::size_t>(it - n.begin());
  }

  std::size_t require(std::string_view name) const {
    if (auto i = index_of(name)) return *i;
    throw StructuralError("unknown variable " + std::string(name));
  }

  bool operator==(const VarContext& other) const {
    return data_ == other.data_ ||
           (data_->main == other.data_->main && data_->coeff == other.data_->coeff);
  }

  static bool valid_name(std::string_view n) {
    if (n.empty() || !std::isalpha(static_cast<unsigned char>(n[0]))) return false;
    return std::all_of(n.begin(), n.end(), [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
  }

 private:
  struct Data {
    std::vector<std::string> coeff;
    std::vector<std::string> main;
    std::vector<std::string> names;
  };

  explicit VarContext(std::shared_ptr<const Data> d) : data_(std::move(d)) {}

  static std::shared_ptr<const Data> empty_data() {
    static const auto empty = std::make_shared<const Data>();
    return empty;
  }

  std::shared_ptr<const Data> data_;
};

}  // namespace lndkit
