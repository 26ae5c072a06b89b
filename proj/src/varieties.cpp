#include "relfree/varieties.hpp"

#include <algorithm>
#include <set>

namespace relfree {

AbelianVector abelianize(const Word& w) {
  AbelianVector v;
  for (Letter l : w.letters()) {
    long long& e = v[l.index()];
    e += l.sign();
    if (e == 0) v.erase(l.index());
  }
  return v;
}

AbelianVector abelian_add(const AbelianVector& a, const AbelianVector& b) {
  AbelianVector v = a;
  for (auto& [i, e] : b) {
    long long& x = v[i];
    x += e;
    if (x == 0) v.erase(i);
  }
  return v;
}

AbelianVector abelian_negate(const AbelianVector& a) {
  AbelianVector v;
  for (auto& [i, e] : a) v[i] = -e;
  return v;
}

namespace {

using Matrix = std::vector<std::vector<BigInt>>;

BigInt abs_big(const BigInt& x) { return x < 0 ? BigInt(-x) : x; }

BigInt gcd_big(BigInt a, BigInt b) {
  a = abs_big(a);
  b = abs_big(b);
  while (b != 0) {
    BigInt r = a % b;
    a = b;
    b = r;
  }
  return a;
}

// Diagonalizes m in place by integer row/column operations, mirroring row ops
// onto rhs (when given) and column ops onto col_transform (when given).
// Returns the diagonal, without the divisibility chain normalization.
std::vector<BigInt> diagonalize(Matrix& m, std::vector<BigInt>* rhs, Matrix* col_transform) {
  size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  auto swap_rows = [&](size_t a, size_t b) {
    if (a == b) return;
    std::swap(m[a], m[b]);
    if (rhs) std::swap((*rhs)[a], (*rhs)[b]);
  };
  auto swap_cols = [&](size_t a, size_t b) {
    if (a == b) return;
    for (size_t i = 0; i < rows; ++i) std::swap(m[i][a], m[i][b]);
    if (col_transform)
      for (auto& row : *col_transform) std::swap(row[a], row[b]);
  };
  auto row_sub = [&](size_t target, size_t source, const BigInt& q) {
    for (size_t j = 0; j < cols; ++j) m[target][j] -= q * m[source][j];
    if (rhs) (*rhs)[target] -= q * (*rhs)[source];
  };
  auto col_sub = [&](size_t target, size_t source, const BigInt& q) {
    for (size_t i = 0; i < rows; ++i) m[i][target] -= q * m[i][source];
    if (col_transform)
      for (auto& row : *col_transform) row[target] -= q * row[source];
  };

  std::vector<BigInt> diag;
  size_t limit = std::min(rows, cols);
  for (size_t t = 0; t < limit; ++t) {
    // smallest nonzero entry of the trailing submatrix becomes the pivot
    size_t pi = t, pj = t;
    BigInt best = 0;
    for (size_t i = t; i < rows; ++i)
      for (size_t j = t; j < cols; ++j)
        if (m[i][j] != 0 && (best == 0 || abs_big(m[i][j]) < best)) {
          best = abs_big(m[i][j]);
          pi = i;
          pj = j;
        }
    if (best == 0) break;
    swap_rows(t, pi);
    swap_cols(t, pj);

    bool clean = false;
    while (!clean) {
      clean = true;
      for (size_t i = 0; i < rows; ++i) {
        if (i == t || m[i][t] == 0) continue;
        BigInt q = m[i][t] / m[t][t];
        row_sub(i, t, q);
        if (m[i][t] != 0) {  // remainder is smaller than the pivot
          swap_rows(i, t);
          clean = false;
        }
      }
      for (size_t j = 0; j < cols; ++j) {
        if (j == t || m[t][j] == 0) continue;
        BigInt q = m[t][j] / m[t][t];
        col_sub(j, t, q);
        if (m[t][j] != 0) {
          swap_cols(j, t);
          clean = false;
        }
      }
    }
    diag.push_back(abs_big(m[t][t]));
  }
  diag.resize(limit, BigInt(0));
  return diag;
}

}  // namespace

std::vector<BigInt> smith_diagonal(Matrix m) {
  std::vector<BigInt> diag = diagonalize(m, nullptr, nullptr);
  // diag(a, b) ~ diag(gcd, lcm): pairwise sweeps establish d_1 | d_2 | ...
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i + 1 < diag.size(); ++i) {
      if (diag[i + 1] == 0) continue;
      if (diag[i] == 0 || diag[i + 1] % diag[i] != 0) {
        BigInt g = gcd_big(diag[i], diag[i + 1]);
        BigInt l = g == 0 ? BigInt(0) : BigInt(diag[i] / g * diag[i + 1]);
        diag[i] = g;
        diag[i + 1] = abs_big(l);
        changed = true;
      }
    }
  }
  return diag;
}

std::optional<std::vector<BigInt>> solve_integer(const Matrix& m_in,
                                                 const std::vector<BigInt>& rhs_in) {
  Matrix m = m_in;
  size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  if (rhs_in.size() != rows) throw validation_error("solve_integer: rhs size mismatch");
  std::vector<BigInt> b = rhs_in;
  Matrix q(cols, std::vector<BigInt>(cols, 0));
  for (size_t j = 0; j < cols; ++j) q[j][j] = 1;

  std::vector<BigInt> diag = diagonalize(m, &b, &q);

  std::vector<BigInt> y(cols, 0);
  for (size_t t = 0; t < diag.size(); ++t) {
    // the sign of the pivot survives in m; diag holds absolute values
    BigInt pivot = m[t][t];
    if (pivot == 0) {
      if (b[t] != 0) return std::nullopt;
    } else {
      if (b[t] % pivot != 0) return std::nullopt;
      y[t] = b[t] / pivot;
    }
  }
  for (size_t i = diag.size(); i < rows; ++i)
    if (b[i] != 0) return std::nullopt;

  std::vector<BigInt> v(cols, 0);
  for (size_t i = 0; i < cols; ++i)
    for (size_t j = 0; j < cols; ++j) v[i] += q[i][j] * y[j];
  return v;
}

namespace {

// Rows of the matrix spanned by the vectors, over the sorted union of their
// supports.
Matrix vectors_to_matrix(std::span<const AbelianVector> vectors) {
  std::set<uint32_t> support;
  for (const auto& v : vectors)
    for (auto& [i, e] : v) support.insert(i);
  std::vector<uint32_t> columns(support.begin(), support.end());
  Matrix m(vectors.size(), std::vector<BigInt>(columns.size(), 0));
  for (size_t r = 0; r < vectors.size(); ++r)
    for (size_t c = 0; c < columns.size(); ++c) {
      auto it = vectors[r].find(columns[c]);
      if (it != vectors[r].end()) m[r][c] = it->second;
    }
  return m;
}

}  // namespace

bool abelian_independent(std::span<const AbelianVector> vectors, uint64_t modulus) {
  if (modulus == 1) throw validation_error("modulus must be 0 (for Z) or at least 2");
  if (vectors.empty()) return true;
  Matrix m = vectors_to_matrix(vectors);
  std::vector<BigInt> diag = smith_diagonal(std::move(m));
  diag.resize(vectors.size(), BigInt(0));  // short diagonals mean dependence
  for (const BigInt& d : diag) {
    if (modulus == 0) {
      if (d != 1) return false;
    } else {
      if (gcd_big(d, BigInt(modulus)) != 1) return false;
    }
  }
  return true;
}

std::string VarietyTag::str() const {
  switch (kind_) {
    case Kind::absolute: return "absolute";
    case Kind::abelian: return "abelian";
    case Kind::abelian_exponent: return "abelian_exponent(" + std::to_string(exponent_) + ")";
    case Kind::nilpotent_class2: return "nilpotent_class2";
  }
  throw std::logic_error("bad variety kind");
}

bool abelian_independent(std::span<const AbelianVector> vectors, const VarietyTag& tag) {
  switch (tag.kind()) {
    case VarietyTag::Kind::abelian:
      return abelian_independent(vectors, 0);
    case VarietyTag::Kind::abelian_exponent:
      return abelian_independent(vectors, tag.exponent());
    default:
      throw validation_error("independence test implemented for abelian-level varieties only");
  }
}

bool in_row_lattice(std::span<const AbelianVector> rows, const AbelianVector& target) {
  std::set<uint32_t> support;
  for (const auto& v : rows)
    for (auto& [i, e] : v) support.insert(i);
  for (auto& [i, e] : target) support.insert(i);
  std::vector<uint32_t> columns(support.begin(), support.end());

  // x * A = target, transposed to A^T x = target^T.
  Matrix mt(columns.size(), std::vector<BigInt>(rows.size(), 0));
  std::vector<BigInt> rhs(columns.size(), 0);
  for (size_t c = 0; c < columns.size(); ++c) {
    for (size_t r = 0; r < rows.size(); ++r) {
      auto it = rows[r].find(columns[c]);
      if (it != rows[r].end()) mt[c][r] = it->second;
    }
    auto it = target.find(columns[c]);
    if (it != target.end()) rhs[c] = it->second;
  }
  return solve_integer(mt, rhs).has_value();
}

Nil2Element Nil2Element::inverse() const {
  Nil2Element r;
  r.exponents = abelian_negate(exponents);
  // d_{ij} = -c_{ij} - A_i A_j, including pairs with no stored commutator
  std::set<std::pair<uint32_t, uint32_t>> keys;
  for (auto& [key, c] : commutators) keys.insert(key);
  for (auto& [i, ei] : exponents)
    for (auto& [j, ej] : exponents)
      if (i < j) keys.insert({i, j});
  for (auto& key : keys) {
    long long c = 0, ai = 0, aj = 0;
    if (auto it = commutators.find(key); it != commutators.end()) c = it->second;
    if (auto it = exponents.find(key.first); it != exponents.end()) ai = it->second;
    if (auto it = exponents.find(key.second); it != exponents.end()) aj = it->second;
    long long d = -c - ai * aj;
    if (d != 0) r.commutators[key] = d;
  }
  return r;
}

Nil2Element operator*(const Nil2Element& a, const Nil2Element& b) {
  Nil2Element r;
  r.exponents = abelian_add(a.exponents, b.exponents);
  std::set<std::pair<uint32_t, uint32_t>> keys;
  for (auto& [key, c] : a.commutators) keys.insert(key);
  for (auto& [key, c] : b.commutators) keys.insert(key);
  for (auto& [j, ej] : a.exponents)
    for (auto& [i, ei] : b.exponents)
      if (i < j) keys.insert({i, j});
  // collection correction: moving the left factor's x_j past the right
  // factor's x_i (i < j) deposits [x_i, x_j]^{-A_j B_i}
  for (auto& key : keys) {
    long long c = 0;
    if (auto it = a.commutators.find(key); it != a.commutators.end()) c += it->second;
    if (auto it = b.commutators.find(key); it != b.commutators.end()) c += it->second;
    long long aj = 0, bi = 0;
    if (auto it = a.exponents.find(key.second); it != a.exponents.end()) aj = it->second;
    if (auto it = b.exponents.find(key.first); it != b.exponents.end()) bi = it->second;
    c -= aj * bi;
    if (c != 0) r.commutators[key] = c;
  }
  return r;
}

Nil2Element nil2_normal_form(const Word& w, uint32_t rank) {
  if (w.max_index() >= static_cast<long>(rank))
    throw validation_error("word uses a generator at or above the given rank");
  Nil2Element r;
  AbelianVector running;
  for (Letter l : w.letters()) {
    uint32_t i = l.index();
    long long s = l.sign();
    for (auto& [j, ej] : running) {
      if (j <= i || ej == 0) continue;
      long long& c = r.commutators[{i, j}];
      c -= ej * s;
      if (c == 0) r.commutators.erase({i, j});
    }
    long long& e = running[i];
    e += s;
  }
  for (auto& [i, e] : running)
    if (e != 0) r.exponents[i] = e;
  return r;
}

Dyadic::Dyadic(BigInt numerator, uint32_t exponent)
    : numerator_(std::move(numerator)), exponent_(exponent) {
  if (numerator_ == 0) {
    exponent_ = 0;
    return;
  }
  while (exponent_ > 0 && numerator_ % 2 == 0) {
    numerator_ /= 2;
    --exponent_;
  }
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  uint32_t e = std::max(a.exponent_, b.exponent_);
  BigInt num = (a.numerator_ << (e - a.exponent_)) + (b.numerator_ << (e - b.exponent_));
  return Dyadic(std::move(num), e);
}

Dyadic Dyadic::negate() const { return Dyadic(-numerator_, exponent_); }

Dyadic Dyadic::doubled() const { return Dyadic(numerator_ * 2, exponent_); }

Dyadic Dyadic::times_pow2(uint32_t k) const { return Dyadic(numerator_ << k, exponent_); }

std::string Dyadic::str() const {
  return numerator_.str() + "/2^" + std::to_string(exponent_);
}

Dyadic dyadic_eval(const Word& w) {
  if (w.empty()) return Dyadic::zero();
  uint32_t max_index = 0;
  for (Letter l : w.letters()) max_index = std::max(max_index, l.index());
  BigInt num = 0;
  for (Letter l : w.letters()) {
    BigInt term = BigInt(1) << (max_index - l.index());
    num += l.sign() > 0 ? term : -term;
  }
  return Dyadic(std::move(num), max_index);
}

}  // namespace relfree
