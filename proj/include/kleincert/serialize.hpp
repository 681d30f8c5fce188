#pragma once

// JSON forms of field elements, matrices and polynomials.
//
//   field element  {"conductor": n, "coords": ["p/q", ...]}
//   matrix         row-major [[e, e, e], [e, e, e], [e, e, e]]
//   polynomial     [{"exp": [e1, e2, e3], "coeff": c}, ...], leading term first
//                  (descending grlex); a parametric coefficient c is itself a
//                  polynomial in (lambda, mu, nu)

#include "kleincert/cyclotomic.hpp"
#include "kleincert/matrix3.hpp"
#include "kleincert/sparse_poly.hpp"

#include <json.hpp>

#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace kleincert {

using json = nlohmann::json;

struct FormatError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline json to_json(const Rational& r) { return to_string(r); }

inline json to_json(const FieldElement& x) {
  json coords = json::array();
  for (const auto& c : x.coords()) coords.push_back(to_string(c));
  return json{{"conductor", x.conductor()}, {"coords", std::move(coords)}};
}

inline FieldElement field_element_from_json(const json& j) {
  try {
    const unsigned n = j.at("conductor").get<unsigned>();
    if (n == 0) throw FormatError("conductor must be positive");
    const auto f = field_make(n);
    std::vector<Rational> coords;
    for (const auto& c : j.at("coords")) coords.push_back(parse_rational(c.get<std::string>()));
    return FieldElement::from_coords(f, coords);
  } catch (const json::exception& e) {
    throw FormatError(std::string("field element: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("field element: ") + e.what());
  }
}

/// Reads into a given field (the element's own conductor must divide it).
inline FieldElement field_element_from_json(const json& j, const FieldPtr& f) {
  return embed(field_element_from_json(j), f);
}

inline json to_json(const Matrix3& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < 3; ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < 3; ++k) row.push_back(to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix3 matrix_from_json(const json& j, const FieldPtr& f) {
  if (!j.is_array() || j.size() != 3) throw FormatError("matrix: expected 3 rows");
  std::array<FieldElement, 9> e;
  for (std::size_t i = 0; i < 3; ++i) {
    if (!j[i].is_array() || j[i].size() != 3) throw FormatError("matrix: expected 3 entries per row");
    for (std::size_t k = 0; k < 3; ++k) e[3 * i + k] = field_element_from_json(j[i][k], f);
  }
  return Matrix3(std::move(e));
}

/// Matrix over the smallest field containing all its entries' conductors.
inline Matrix3 matrix_from_json(const json& j) {
  unsigned n = 1;
  for (const auto& row : j)
    for (const auto& x : row) n = std::lcm(n, x.at("conductor").get<unsigned>());
  return matrix_from_json(j, field_make(n));
}

template <class R, std::size_t N>
json to_json(const SparsePoly<R, N>& p) {
  json out = json::array();
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    json exp = json::array();
    for (auto v : it->first) exp.push_back(v);
    out.push_back(json{{"exp", std::move(exp)}, {"coeff", to_json(it->second)}});
  }
  return out;
}

namespace detail {

template <class R>
struct CoeffReader;

template <>
struct CoeffReader<Rational> {
  static Rational read(const json& j, const Rational&) { return parse_rational(j.get<std::string>()); }
};
template <>
struct CoeffReader<FieldElement> {
  static FieldElement read(const json& j, const FieldElement& proto) {
    return field_element_from_json(j, proto.field());
  }
};

}  // namespace detail

template <class P>
P poly_from_json(const json& j, const typename P::coefficient_type& proto);

namespace detail {

template <class R, std::size_t N>
struct CoeffReader<SparsePoly<R, N>> {
  static SparsePoly<R, N> read(const json& j, const SparsePoly<R, N>& proto) {
    return poly_from_json<SparsePoly<R, N>>(j, proto.zero_coefficient());
  }
};

}  // namespace detail

/// proto supplies the coefficient field (and, for nested coefficients, the
/// inner field).
template <class P>
P poly_from_json(const json& j, const typename P::coefficient_type& proto) {
  using R = typename P::coefficient_type;
  if (!j.is_array()) throw FormatError("polynomial: expected an array of terms");
  P out(proto);
  try {
    for (const auto& t : j) {
      typename P::Exp e{};
      const auto& ej = t.at("exp");
      if (ej.size() != P::arity) throw FormatError("polynomial: exponent arity mismatch");
      for (std::size_t i = 0; i < P::arity; ++i) {
        const long v = ej[i].get<long>();
        if (v < 0) throw FormatError("polynomial: negative exponent");
        e[i] = static_cast<unsigned>(v);
      }
      if (out.terms().count(e)) throw FormatError("polynomial: repeated exponent");
      out.add_term(e, detail::CoeffReader<R>::read(t.at("coeff"), proto));
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("polynomial: ") + e.what());
  }
  return out;
}

}  // namespace kleincert
