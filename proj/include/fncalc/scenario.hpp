#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "fncalc/foliation.hpp"
#include "fncalc/levi.hpp"

namespace fncalc {

/// Node of the scenario syntax tree, with its 1-based source position.
struct Value {
  enum class Kind { String, Number, Word, List, Object };
  Kind kind = Kind::Word;
  std::string text;
  std::vector<Value> items;
  std::vector<std::pair<std::string, Value>> fields;
  std::size_t line = 1;
  std::size_t column = 1;

  const Value* find(std::string_view key) const;
  bool is_bool() const { return kind == Kind::Word && (text == "true" || text == "false"); }
};

/// `kind name? { key: value ... }`
struct Block {
  std::string kind;
  std::string name;
  Value body;
  std::size_t line = 1;
  std::size_t column = 1;
};

struct Document {
  std::vector<std::pair<std::string, Value>> settings;
  std::vector<Block> blocks;
};

/// Syntax only; throws ParseError.
Document parse_document(std::string_view text);

/// Deformation family gamma_t, X_t written with the extra parameter `t`.
struct Family {
  std::vector<std::pair<std::vector<int>, std::string>> gamma_terms;
  std::vector<std::string> x_components;
};

using Param = std::variant<long, bool, std::string, Scalar, VectorField, KForm, VVForm, Distribution,
                           DefiningCouple, Flag, Hypersurface, Family>;

struct Expect {
  enum class Kind { Bool, Integer, Word, Scalar };
  Kind kind = Kind::Bool;
  bool flag = false;
  long integer = 0;
  std::string word;
  std::optional<Scalar> scalar;
  /// Source text, for reports.
  std::string text;
};

struct CheckSpec {
  std::string kind;
  std::string name;
  std::size_t line = 1;
  std::map<std::string, Param> params;
  std::optional<Expect> expect;

  bool has(const std::string& key) const { return params.count(key) != 0; }
  template <class T>
  const T& get(const std::string& key) const {
    return std::get<T>(params.at(key));
  }
};

struct Scenario {
  Chart chart;
  std::optional<ComplexChart> complex_chart;
  std::optional<std::uint64_t> seed;
  std::optional<int> cap;
  std::vector<std::string> object_names;
  std::vector<CheckSpec> checks;
};

/// Check kinds in the order they are documented.
const std::vector<std::string>& check_kinds();

/// Parses and resolves every name; throws ParseError with the location of
/// the offending token on syntax, resolution or chart errors.
Scenario parse_scenario(std::string_view text);

}  // namespace fncalc
