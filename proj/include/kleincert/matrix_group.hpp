#pragma once

// Finite matrix groups given by generators: breadth-first closure with
// generator tables, the collineation image PG = G / (scalars in G), conjugacy
// classes there, a simplicity test, and the J168 / J'504 fixtures.

#include "kleincert/cyclotomic.hpp"
#include "kleincert/matrix3.hpp"
#include "kleincert/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <fstream>
#include <numbers>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace kleincert {

inline constexpr std::size_t kClosureBound = 10000;

struct ClosureBoundExceeded : std::runtime_error {
  explicit ClosureBoundExceeded(std::size_t bound)
      : std::runtime_error("closure exceeded " + std::to_string(bound) + " elements") {}
};

/// Key of the projective class of m: scale so the first nonzero entry
/// (row-major) is 1.
inline std::string projective_key(const Matrix3& m) {
  std::size_t k = 0;
  while (k < 9 && m.entries()[k].is_zero()) ++k;
  if (k == 9) throw std::domain_error("projective_key of the zero matrix");
  if (m.entries()[k].is_one()) return m.key();
  return m.scaled(m.entries()[k].inverse()).key();
}

class MatrixGroup {
 public:
  /// Breadth-first closure of gens under right multiplication by gens.
  static MatrixGroup closure(std::vector<Matrix3> gens, std::size_t bound = kClosureBound) {
    if (gens.empty()) throw std::invalid_argument("closure: no generators");
    MatrixGroup g;
    g.field_ = gens.front().field();
    for (const auto& m : gens) {
      if (!same_field(m.field(), g.field_)) throw FieldMismatch("closure: generators over different fields");
      if (m.det().is_zero()) throw SingularMatrix();
    }
    g.gens_ = std::move(gens);
    g.insert(Matrix3::identity(g.field_), npos, npos);
    for (std::size_t head = 0; head < g.elements_.size(); ++head) {
      for (std::size_t s = 0; s < g.gens_.size(); ++s) {
        Matrix3 y = g.elements_[head] * g.gens_[s];
        auto it = g.index_.find(y.key());
        std::size_t j;
        if (it == g.index_.end()) {
          if (g.elements_.size() >= bound) throw ClosureBoundExceeded(bound);
          j = g.insert(std::move(y), head, s);
        } else {
          j = it->second;
        }
        g.right_[head][s] = j;
      }
    }
    g.build_projective();
    return g;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  const FieldPtr& field() const noexcept { return field_; }
  std::size_t order() const noexcept { return elements_.size(); }
  const std::vector<Matrix3>& elements() const noexcept { return elements_; }
  const Matrix3& element(std::size_t i) const { return elements_.at(i); }
  const std::vector<Matrix3>& generators() const noexcept { return gens_; }
  std::size_t identity_index() const noexcept { return 0; }

  std::optional<std::size_t> find(const Matrix3& m) const {
    auto it = index_.find(m.key());
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  bool contains(const Matrix3& m) const { return find(m).has_value(); }

  /// elements()[i] * generators()[s].
  std::size_t right_mul(std::size_t i, std::size_t s) const { return right_[i][s]; }

  /// Generator word w with element(i) = w[0] w[1] ... (BFS tree path).
  std::vector<std::size_t> word(std::size_t i) const {
    std::vector<std::size_t> w;
    while (parent_[i] != npos) {
      w.push_back(parent_gen_[i]);
      i = parent_[i];
    }
    std::reverse(w.begin(), w.end());
    return w;
  }

  std::size_t multiply(std::size_t i, std::size_t j) const {
    for (auto s : word(j)) i = right_[i][s];
    return i;
  }

  std::size_t inverse(std::size_t i) const {
    auto j = find(elements_[i].inverse());
    if (!j) throw std::logic_error("group is not closed under inverses");
    return *j;
  }

  std::size_t element_order(std::size_t i) const {
    std::size_t k = 1, x = i;
    while (x != 0) {
      x = multiply(x, i);
      ++k;
    }
    return k;
  }

  // ---- collineation image ----

  /// Indices of the scalar matrices in G.
  const std::vector<std::size_t>& scalar_subgroup() const noexcept { return scalars_; }
  std::size_t collineation_order() const noexcept { return proj_reps_.size(); }
  /// Projective class id of element i; class c has representative proj_reps()[c].
  std::size_t projective_class(std::size_t i) const { return proj_class_[i]; }
  const std::vector<std::size_t>& projective_representatives() const noexcept { return proj_reps_; }
  const std::string& projective_key_of(std::size_t i) const { return proj_keys_[proj_class_[i]]; }
  std::set<std::string> projective_key_set() const { return {proj_keys_.begin(), proj_keys_.end()}; }

  /// Order of element i in PG: least k with element(i)^k scalar.
  std::size_t collineation_element_order(std::size_t i) const {
    std::size_t k = 1, x = i;
    while (proj_class_[x] != proj_class_[0]) {
      x = multiply(x, i);
      ++k;
    }
    return k;
  }

  /// Minimal conductor of the generator entries.
  unsigned minimal_conductor_of_generators() const {
    std::vector<FieldElement> xs;
    for (const auto& m : gens_)
      for (const auto& x : m.entries()) xs.push_back(x);
    return minimal_conductor(xs);
  }

  /// The same group over Q(zeta_d), d | conductor, with identical element
  /// indexing. d = 0 picks the minimal conductor of the generators.
  MatrixGroup descended(unsigned d = 0) const {
    if (d == 0) d = minimal_conductor_of_generators();
    if (d == field_->conductor()) return *this;
    SubfieldDescent desc(field_, field_make(d));
    std::vector<Matrix3> small;
    for (const auto& m : gens_) {
      auto s = descend(m, desc);
      if (!s) throw FieldMismatch("descended: generator entries outside Q(zeta_" + std::to_string(d) + ")");
      small.push_back(std::move(*s));
    }
    MatrixGroup out = closure(std::move(small), order());
    if (out.order() != order()) throw std::logic_error("descended: order changed");
    return out;
  }

  /// The same group over Q(zeta_m), conductor | m, with identical indexing.
  MatrixGroup embedded(unsigned m) const {
    if (m == field_->conductor()) return *this;
    const auto f = field_make(m);
    std::vector<Matrix3> big;
    for (const auto& g : gens_) big.push_back(embed(g, f));
    return closure(std::move(big), order());
  }

 private:
  std::size_t insert(Matrix3 m, std::size_t parent, std::size_t gen) {
    const std::size_t j = elements_.size();
    index_.emplace(m.key(), j);
    elements_.push_back(std::move(m));
    parent_.push_back(parent);
    parent_gen_.push_back(gen);
    right_.emplace_back(gens_.size(), npos);
    return j;
  }

  void build_projective() {
    std::unordered_map<std::string, std::size_t> cls;
    proj_class_.resize(elements_.size());
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      const auto k = projective_key(elements_[i]);
      auto [it, inserted] = cls.try_emplace(k, proj_reps_.size());
      if (inserted) {
        proj_reps_.push_back(i);
        proj_keys_.push_back(k);
      }
      proj_class_[i] = it->second;
      if (elements_[i].is_scalar()) scalars_.push_back(i);
    }
  }

  FieldPtr field_;
  std::vector<Matrix3> gens_;
  std::vector<Matrix3> elements_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::size_t> parent_, parent_gen_;
  std::vector<std::vector<std::size_t>> right_;
  std::vector<std::size_t> proj_class_, proj_reps_, scalars_;
  std::vector<std::string> proj_keys_;
};

// ---- conjugacy, center, simplicity ----

struct ConjugacyClass {
  std::size_t representative;  // element index in G
  std::size_t size;            // number of collineations in the class
  std::size_t element_order;   // order in PG
};

struct ConjugacyData {
  std::vector<ConjugacyClass> classes;
  std::vector<std::size_t> class_of;  // projective class id -> conjugacy class index
  std::size_t center_order = 0;       // |Z(G)|
};

/// Classes of PG, found by conjugating with the generators until stable.
inline ConjugacyData conjugacy_classes(const MatrixGroup& g) {
  ConjugacyData out;
  const std::size_t n = g.collineation_order();
  const auto& reps = g.projective_representatives();
  out.class_of.assign(n, MatrixGroup::npos);
  std::vector<std::size_t> gen_inv;
  for (std::size_t s = 0; s < g.generators().size(); ++s) {
    auto j = g.find(g.generators()[s].inverse());
    if (!j) throw std::logic_error("generator inverse missing from group");
    gen_inv.push_back(*j);
  }
  std::vector<std::size_t> gen_idx;
  for (const auto& m : g.generators()) gen_idx.push_back(*g.find(m));
  for (std::size_t c = 0; c < n; ++c) {
    if (out.class_of[c] != MatrixGroup::npos) continue;
    const std::size_t id = out.classes.size();
    std::deque<std::size_t> queue{c};
    out.class_of[c] = id;
    std::size_t size = 0;
    while (!queue.empty()) {
      const std::size_t x = queue.front();
      queue.pop_front();
      ++size;
      for (std::size_t s = 0; s < gen_idx.size(); ++s) {
        const std::size_t y = g.projective_class(g.right_mul(g.multiply(gen_inv[s], reps[x]), s));
        if (out.class_of[y] == MatrixGroup::npos) {
          out.class_of[y] = id;
          queue.push_back(y);
        }
      }
    }
    out.classes.push_back({reps[c], size, g.collineation_element_order(reps[c])});
  }
  for (std::size_t i = 0; i < g.order(); ++i) {
    bool central = true;
    for (std::size_t s = 0; s < gen_idx.size() && central; ++s)
      central = g.right_mul(i, s) == g.multiply(gen_idx[s], i);
    out.center_order += central ? 1 : 0;
  }
  return out;
}

/// Subgroup of G generated by the given element indices.
inline std::vector<std::size_t> generated_subgroup(const MatrixGroup& g, const std::vector<std::size_t>& gens) {
  std::vector<char> in(g.order(), 0);
  std::vector<std::size_t> out{g.identity_index()};
  in[g.identity_index()] = 1;
  for (std::size_t head = 0; head < out.size(); ++head)
    for (auto s : gens) {
      const std::size_t y = g.multiply(out[head], s);
      if (!in[y]) {
        in[y] = 1;
        out.push_back(y);
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

struct SimplicityCertificate {
  bool simple = false;
  std::string reason;
  std::size_t witness_order = 0;             // order of the proper normal subgroup found
  std::vector<std::size_t> witness_classes;  // conjugacy classes forming it (PG case)
  std::size_t group_order = 0;               // order of the group tested
};

/// Decides simplicity of G itself when G has a nontrivial proper center
/// (not simple, witnessed by the center); otherwise decides simplicity of PG:
/// a proper nontrivial normal subgroup is a union of classes containing the
/// identity whose size divides |PG| and which is closed under products.
inline SimplicityCertificate simplicity_certificate(const MatrixGroup& g, const ConjugacyData& cd) {
  SimplicityCertificate out;
  if (cd.center_order > 1 && cd.center_order < g.order()) {
    out.group_order = g.order();
    out.reason = "nontrivial proper center";
    out.witness_order = cd.center_order;
    return out;
  }
  const std::size_t n = g.collineation_order();
  out.group_order = n;
  if (n == 1) {
    out.reason = "trivial group";
    return out;
  }
  std::vector<std::size_t> nontrivial;
  for (std::size_t k = 0; k < cd.classes.size(); ++k)
    if (g.projective_class(cd.classes[k].representative) != 0) nontrivial.push_back(k);
  const bool abelian = nontrivial.size() + 1 == n;
  if (abelian) {
    // every subgroup is normal; a prime-order element gives a witness unless |PG| is prime
    for (std::size_t k : nontrivial) {
      const std::size_t o = cd.classes[k].element_order;
      bool prime = o > 1;
      for (std::size_t p = 2; p * p <= o; ++p) prime = prime && o % p != 0;
      if (prime && o < n) {
        out.reason = "abelian of composite order";
        out.witness_order = o;
        out.witness_classes = {k};
        return out;
      }
    }
    out.simple = true;
    out.reason = "cyclic of prime order";
    return out;
  }
  if (nontrivial.size() > 24) throw std::runtime_error("simplicity_certificate: too many conjugacy classes");
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << nontrivial.size()); ++mask) {
    std::size_t total = 1;
    std::vector<std::size_t> chosen;
    for (std::size_t b = 0; b < nontrivial.size(); ++b)
      if (mask >> b & 1) {
        total += cd.classes[nontrivial[b]].size;
        chosen.push_back(nontrivial[b]);
      }
    if (total >= n || n % total != 0) continue;
    // candidate: generate in G from all preimages of the chosen classes
    std::vector<std::size_t> gens;
    for (std::size_t i = 0; i < g.order(); ++i) {
      const std::size_t k = cd.class_of[g.projective_class(i)];
      if (std::find(chosen.begin(), chosen.end(), k) != chosen.end()) gens.push_back(i);
    }
    const auto h = generated_subgroup(g, gens);
    std::set<std::size_t> image;
    for (auto i : h) image.insert(g.projective_class(i));
    if (image.size() == total) {
      out.reason = "union of conjugacy classes closed under products";
      out.witness_order = total;
      out.witness_classes = chosen;
      return out;
    }
  }
  out.simple = true;
  out.reason = "no union of classes containing the identity is a proper nontrivial subgroup";
  return out;
}

/// True iff |PG| does not divide p!, so a simple PG has no nontrivial map to
/// S_p. Requires a certificate that PG is simple (the trivial group passes).
inline bool no_small_symmetric_image(const MatrixGroup& g, const SimplicityCertificate& cert, unsigned p) {
  const std::size_t n = g.collineation_order();
  if (n == 1) return true;
  if (!cert.simple || cert.group_order != n)
    throw std::logic_error("no_small_symmetric_image: requires PG certified simple");
  Integer fact = 1;
  for (unsigned k = 2; k <= p; ++k) fact *= k;
  return fact % Integer(static_cast<unsigned long>(n)) != 0;
}

/// Inverse-transposes of the generators, closed.
inline MatrixGroup dual_representation(const MatrixGroup& g) {
  std::vector<Matrix3> gens;
  for (const auto& m : g.generators()) gens.push_back(m.inverse().transpose());
  return MatrixGroup::closure(std::move(gens));
}

inline std::set<std::string> element_key_set(const MatrixGroup& g) {
  std::set<std::string> s;
  for (const auto& m : g.elements()) s.insert(m.key());
  return s;
}

// ---- fixtures ----

struct GroupFixture {
  std::string id;
  unsigned conductor = 1;
  std::vector<std::string> generator_names;
  std::vector<Matrix3> generators;
  std::optional<std::size_t> expected_order;
};

/// Entries of omega from the Gauss sum g = z + z^2 + z^4 - z^3 - z^5 - z^6
/// (g^2 = -7): alpha = g(z^4 - z^3)/7, beta = g(z^2 - z^5)/7, gamma = g(z - z^6)/7.
inline std::array<FieldElement, 3> omega_entries(const FieldPtr& f) {
  auto z = [&](long k) { return root_of_unity(f, 7, k); };
  const FieldElement g = z(1) + z(2) + z(4) - z(3) - z(5) - z(6);
  const Rational seventh = rational(1, 7);
  return {g * (z(4) - z(3)) * seventh, g * (z(2) - z(5)) * seventh, g * (z(1) - z(6)) * seventh};
}

struct OmegaValidation {
  double max_float_error = 0;  // against -2 sin(k pi / 7) / sqrt(7), k = 8, 4, 2
  bool involution = false;
  bool symmetric = false;
  bool det_one = false;
  bool ok(double tol = 1e-12) const { return max_float_error < tol && involution && symmetric && det_one; }
};

inline Matrix3 omega_matrix(const FieldPtr& f) {
  const auto [a, b, c] = omega_entries(f);
  return Matrix3({a, b, c, b, c, a, c, a, b});
}

inline OmegaValidation validate_omega(const FieldPtr& f) {
  OmegaValidation v;
  const auto e = omega_entries(f);
  const double s7 = std::sqrt(7.0);
  const double trig[3] = {-2 * std::sin(8 * std::numbers::pi / 7) / s7, -2 * std::sin(4 * std::numbers::pi / 7) / s7,
                          -2 * std::sin(2 * std::numbers::pi / 7) / s7};
  for (int i = 0; i < 3; ++i) v.max_float_error = std::max(v.max_float_error, std::abs(e[i].to_complex() - trig[i]));
  const Matrix3 w = omega_matrix(f);
  v.involution = (w * w).is_identity();
  v.symmetric = w == w.transpose();
  v.det_one = w.det().is_one();
  return v;
}

/// tau, chi, omega over Q(zeta_conductor); 7 | conductor.
inline GroupFixture fixture_j168(unsigned conductor = 84) {
  if (conductor % 7 != 0) throw std::invalid_argument("J168 needs 7 | conductor");
  const auto f = field_make(conductor);
  auto z = [&](long k) { return root_of_unity(f, 7, k); };
  GroupFixture fx;
  fx.id = "j168";
  fx.conductor = conductor;
  fx.generator_names = {"tau", "chi", "omega"};
  fx.generators = {Matrix3::diagonal(z(1), z(2), z(4)), Matrix3::from_integers(f, {0, 0, 1, 1, 0, 0, 0, 1, 0}),
                   omega_matrix(f)};
  fx.expected_order = 168;
  return fx;
}

/// J168 plus the scalar exp(2 pi i / 3) I; 21 | conductor.
inline GroupFixture fixture_j504(unsigned conductor = 84) {
  if (conductor % 21 != 0) throw std::invalid_argument("J'504 needs 21 | conductor");
  GroupFixture fx = fixture_j168(conductor);
  const auto f = field_make(conductor);
  fx.id = "j504";
  fx.generator_names.push_back("zeta3");
  fx.generators.push_back(Matrix3::scalar(root_of_unity(f, 3, 1)));
  fx.expected_order = 504;
  return fx;
}

inline GroupFixture fixture_by_id(const std::string& id) {
  if (id == "j168") return fixture_j168();
  if (id == "j504") return fixture_j504();
  throw std::invalid_argument("unknown group id '" + id + "' (expected j168 or j504)");
}

inline json fixture_to_json(const GroupFixture& fx) {
  json gens = json::array();
  for (const auto& m : fx.generators) gens.push_back(to_json(m));
  json j{{"id", fx.id}, {"conductor", fx.conductor}, {"generators", std::move(gens)}};
  if (fx.expected_order) j["expected_order"] = *fx.expected_order;
  return j;
}

inline GroupFixture fixture_from_json(const json& j) {
  GroupFixture fx;
  try {
    fx.conductor = j.at("conductor").get<unsigned>();
    if (fx.conductor == 0) throw FormatError("fixture: conductor must be positive");
    const auto f = field_make(fx.conductor);
    fx.id = j.value("id", std::string("fixture"));
    const auto& gens = j.at("generators");
    if (!gens.is_array() || gens.empty()) throw FormatError("fixture: generators must be a nonempty array");
    for (std::size_t k = 0; k < gens.size(); ++k) {
      fx.generators.push_back(matrix_from_json(gens[k], f));
      fx.generator_names.push_back("g" + std::to_string(k + 1));
    }
    if (j.contains("expected_order")) fx.expected_order = j.at("expected_order").get<std::size_t>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("fixture: ") + e.what());
  } catch (const FieldMismatch& e) {
    throw FormatError(std::string("fixture: ") + e.what());
  }
  return fx;
}

inline GroupFixture load_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open fixture '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError("fixture '" + path + "': " + e.what());
  }
  return fixture_from_json(j);
}

/// FNV-1a over the canonical JSON text.
inline std::string fixture_digest(const GroupFixture& fx) {
  const std::string s = fixture_to_json(fx).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline MatrixGroup build_group(const GroupFixture& fx, std::size_t bound = kClosureBound) {
  return MatrixGroup::closure(fx.generators, bound);
}

}  // namespace kleincert
