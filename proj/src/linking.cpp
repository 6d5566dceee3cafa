#include "loopexp/linking.hpp"

namespace loopexp {

void EqLinkingMatrix::validate() const {
  int n = size();
  for (const auto& row : entries)
    if (static_cast<int>(row.size()) != n) throw Malformed("EqLinkingMatrix: not square");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!(entries[j][i] == entries[i][j].mirror()))
        throw Malformed("EqLinkingMatrix: equivariance l_ji(t) = l_ij(t^-1) violated");
}

void TangleLinkingData::validate() const {
  int g = genus();
  auto square = [&](const IntMatrix& m) {
    if (static_cast<int>(m.size()) != g) return false;
    for (const auto& row : m)
      if (static_cast<int>(row.size()) != g) return false;
    return true;
  };
  if (!square(U) || !square(V) || !square(W))
    throw Malformed("TangleLinkingData: blocks must be square of equal size");
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j)
      if (U[i][j] != U[j][i] || V[i][j] != V[j][i])
        throw Malformed("TangleLinkingData: U and V must be symmetric");
}

EqLinkingMatrix build_surgery_matrix(const TangleLinkingData& d) {
  d.validate();
  int g = d.genus();
  int n = 4 * g;
  EqLinkingMatrix m;
  m.genus = g;
  m.entries.assign(n, std::vector<LaurentPoly>(n));
  const LaurentPoly one = LaurentPoly::one();
  const LaurentPoly tm1 = LaurentPoly::t_power(1) - one;    // t - 1
  const LaurentPoly tim1 = LaurentPoly::t_power(-1) - one;  // t^-1 - 1
  for (int i = 0; i < g; ++i) {
    m.entries[i][g + i] = tim1;
    m.entries[g + i][i] = tm1;
    m.entries[i][2 * g + i] = one;
    m.entries[2 * g + i][i] = one;
    m.entries[g + i][3 * g + i] = one;
    m.entries[3 * g + i][g + i] = one;
    for (int j = 0; j < g; ++j) {
      m.entries[2 * g + i][2 * g + j] = LaurentPoly(Rational(d.U[i][j]));
      m.entries[2 * g + i][3 * g + j] = LaurentPoly(Rational(d.W[i][j]));
      m.entries[3 * g + i][2 * g + j] = LaurentPoly(Rational(d.W[j][i]));
      m.entries[3 * g + i][3 * g + j] = LaurentPoly(Rational(d.V[i][j]));
    }
  }
  m.validate();
  return m;
}

LaurentPoly bareiss_det(const LaurentMatrix& input) {
  int n = static_cast<int>(input.size());
  if (n == 0) return LaurentPoly::one();
  LaurentMatrix a = input;
  LaurentPoly prev = LaurentPoly::one();
  int sign = 1;
  for (int k = 0; k + 1 < n; ++k) {
    if (a[k][k].is_zero()) {
      int r = -1;
      for (int i = k + 1; i < n; ++i)
        if (!a[i][k].is_zero()) { r = i; break; }
      if (r < 0) return LaurentPoly();  // singular
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]).divide_exact(prev);
    prev = a[k][k];
  }
  LaurentPoly det = a[n - 1][n - 1];
  return sign < 0 ? -det : det;
}

namespace {

// Bareiss-Jordan (Montante) elimination on [A | I]: fraction-free; the
// A-part finishes as (final pivot) * I and the augmented part carries the
// adjugate up to the row-swap sign.
void montante_inverse(const LaurentMatrix& input, LaurentPoly* det_out, LaurentMatrix* adj_out) {
  int n = static_cast<int>(input.size());
  LaurentMatrix b(n, std::vector<LaurentPoly>(2 * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) b[i][j] = input[i][j];
    b[i][n + i] = LaurentPoly::one();
  }
  LaurentPoly prev = LaurentPoly::one();
  int sign = 1;
  for (int k = 0; k < n; ++k) {
    if (b[k][k].is_zero()) {
      int r = -1;
      for (int i = k + 1; i < n; ++i)
        if (!b[i][k].is_zero()) { r = i; break; }
      if (r < 0) throw Singular("matrix is singular over the Laurent field");
      std::swap(b[k], b[r]);
      sign = -sign;
    }
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      for (int j = 0; j < 2 * n; ++j) {
        if (j == k) continue;
        b[i][j] = (b[k][k] * b[i][j] - b[i][k] * b[k][j]).divide_exact(prev);
      }
      b[i][k] = LaurentPoly();
    }
    prev = b[k][k];
  }
  LaurentPoly det = b[n - 1][n - 1];
  if (sign < 0) det = -det;
  for (int i = 0; i < n; ++i)
    if (!(b[i][i] == b[n - 1][n - 1])) throw Malformed("Bareiss-Jordan postcondition failed");
  LaurentMatrix adj(n, std::vector<LaurentPoly>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) adj[i][j] = sign < 0 ? -b[i][n + j] : b[i][n + j];
  *det_out = det;
  *adj_out = adj;
}

}  // namespace

InverseOverDelta invert_over_delta(const EqLinkingMatrix& m) {
  m.validate();
  LaurentPoly det;
  LaurentMatrix q;
  montante_inverse(m.entries, &det, &q);
  if (det.is_zero()) throw Singular("invert_over_delta: determinant is zero");
  Rational at1 = det.eval_one();
  if (at1.is_zero())
    throw NormalizationFailure("invert_over_delta: det(M)(1) = 0, cannot normalize");
  LaurentPoly delta = det * at1.inverse();
  if (!delta.symmetric())
    throw NormalizationFailure("invert_over_delta: determinant is not t-symmetric");
  InverseOverDelta out{AlexanderPoly(delta), LaurentMatrix(), 0, true};
  out.q.assign(q.size(), std::vector<LaurentPoly>(q.size()));
  for (size_t i = 0; i < q.size(); ++i)
    for (size_t j = 0; j < q.size(); ++j) out.q[i][j] = q[i][j] * at1.inverse();
  for (const auto& row : out.q)
    for (const auto& e : row) {
      if (e.is_zero()) continue;
      out.q_support_radius = std::max({out.q_support_radius, -e.min_exp(), e.max_exp()});
    }
  out.q_support_within_genus = out.q_support_radius <= m.genus;
  return out;
}

LaurentFraction cofactor(const EqLinkingMatrix& m, int i, int j) {
  int n = m.size();
  if (i < 0 || j < 0 || i >= n || j >= n) throw Malformed("cofactor: index out of range");
  LaurentMatrix minor(n - 1, std::vector<LaurentPoly>(n - 1));
  for (int r = 0, rr = 0; r < n; ++r) {
    if (r == i) continue;
    for (int c = 0, cc = 0; c < n; ++c) {
      if (c == j) continue;
      minor[rr][cc] = m.entries[r][c];
      ++cc;
    }
    ++rr;
  }
  LaurentPoly num = bareiss_det(minor);
  if ((i + j) % 2) num = -num;
  LaurentPoly den = bareiss_det(m.entries);
  if (den.is_zero()) throw Singular("cofactor: matrix is singular");
  return {num, den};
}

BCertificate appendixB_certificate(const EqLinkingMatrix& m) {
  int g = m.genus;
  if (g < 1 || m.size() != 4 * g)
    throw Malformed("appendixB_certificate: not a surgery matrix");
  InverseOverDelta inv = invert_over_delta(m);
  BCertificate cert;

  // Exact cofactor identity q^{3g+1,2g+1}(t) = -(t-1) q^{1,2g+1}(t).
  const LaurentPoly& q_a = inv.q[3 * g][2 * g];
  const LaurentPoly& q_b = inv.q[0][2 * g];
  LaurentPoly tm1 = LaurentPoly::t_power(1) - LaurentPoly::one();
  cert.lgg_identity = (q_a == -(tm1 * q_b));

  cert.value_at_1 = q_b.eval_one();  // Delta(1) = 1 after normalization

  HSeries dinv = inv.delta.poly().exp_substitute(2).invert();
  HSeries s_a = q_a.exp_substitute(2) * dinv;                  // l^{3g+1,2g+1}(e^h)
  HSeries s_b = inv.q[2 * g][3 * g].exp_substitute(2) * dinv;  // l^{2g+1,3g+1}(e^h)
  cert.leading_coeffs_ok = s_a.coeff(0).is_zero() && s_b.coeff(0).is_zero() &&
                           s_a.coeff(1) == Rational(-1) && s_b.coeff(1) == Rational(1);
  cert.r = s_a.coeff(2);
  cert.second_coeffs_equal = (s_a.coeff(2) == s_b.coeff(2));
  Rational twice = cert.r * Rational(2);
  cert.r_half_integer = twice.is_integer() && !cert.r.is_integer();
  return cert;
}

long TangleSampler::entry() {
  state_ ^= state_ >> 12;
  state_ ^= state_ << 25;
  state_ ^= state_ >> 27;
  uint64_t x = state_ * 0x2545F4914F6CDD1DULL;
  return static_cast<long>(x % 7) - 3;
}

TangleLinkingData TangleSampler::sample(int genus) {
  TangleLinkingData d;
  d.U.assign(genus, std::vector<long>(genus, 0));
  d.V.assign(genus, std::vector<long>(genus, 0));
  d.W.assign(genus, std::vector<long>(genus, 0));
  for (int i = 0; i < genus; ++i)
    for (int j = i; j < genus; ++j) {
      d.U[i][j] = d.U[j][i] = entry();
      d.V[i][j] = d.V[j][i] = entry();
    }
  for (int i = 0; i < genus; ++i)
    for (int j = 0; j < genus; ++j) d.W[i][j] = entry();
  return d;
}

}  // namespace loopexp
