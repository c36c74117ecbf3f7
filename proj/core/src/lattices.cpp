#include "freepoints/lattices.hpp"

#include <cmath>
#include <sstream>

namespace freepoints {

namespace {

RationalMatrix GramOf(std::vector<RationalVector> const& basis) {
  std::size_t const r = basis.size();
  RationalMatrix g(r, RationalVector(r, 0));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      Rational s = 0;
      for (std::size_t k = 0; k < basis[i].size(); ++k) s += basis[i][k] * basis[j][k];
      g[i][j] = s;
      g[j][i] = s;
    }
  }
  return g;
}

Rational DotQ(RationalVector const& a, RationalVector const& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

Lattice::Lattice(std::vector<RationalVector> basis, Rational scale_sq)
    : basis_(std::move(basis)), scale_sq_(std::move(scale_sq)) {
  if (basis_.empty()) throw DomainError("a lattice needs at least one basis vector");
  ambient_dim_ = static_cast<int>(basis_[0].size());
  for (auto const& b : basis_) {
    if (static_cast<int>(b.size()) != ambient_dim_) {
      throw DimensionMismatch("basis vectors of unequal length");
    }
  }
  if (rank() > ambient_dim_) throw DomainError("more basis vectors than dimensions");
  if (scale_sq_ <= 0) throw DomainError("metric scale must be positive");
  gram_ = GramOf(basis_);
  if (freepoints::Determinant(gram_) == 0) {
    throw DomainError("basis vectors are linearly dependent");
  }
}

Lattice Lattice::FromIntegers(std::vector<IntVector> const& basis) {
  std::vector<RationalVector> rows;
  rows.reserve(basis.size());
  for (auto const& b : basis) rows.push_back(ToRationalVector(b));
  return Lattice(std::move(rows));
}

Lattice Lattice::Standard(int n) {
  std::vector<IntVector> rows(n, IntVector(n, 0));
  for (int i = 0; i < n; ++i) rows[i][i] = 1;
  return FromIntegers(rows);
}

Lattice Lattice::Parse(std::string_view literal) {
  std::vector<RationalVector> rows;
  std::string text(literal);
  for (char& ch : text) {
    if (ch == ',') ch = ' ';
    if (ch == '|') ch = ';';
  }
  std::stringstream all(text);
  std::string row_text;
  while (std::getline(all, row_text, ';')) {
    std::istringstream row(row_text);
    RationalVector v;
    std::string token;
    while (row >> token) {
      Rational q;
      if (q.set_str(token, 10) != 0) {
        throw DomainError("bad lattice entry '" + token + "'");
      }
      q.canonicalize();
      v.push_back(q);
    }
    if (!v.empty()) rows.push_back(std::move(v));
  }
  return Lattice(std::move(rows));
}

Lattice Lattice::Scaled(Rational const& lambda) const {
  if (lambda == 0) throw DomainError("scaling by zero");
  std::vector<RationalVector> rows = basis_;
  for (auto& row : rows) {
    for (auto& e : row) e *= lambda;
  }
  return Lattice(std::move(rows), scale_sq_);
}

Lattice Lattice::Reduced() const {
  ReducedGram reduced(*this);
  std::vector<RationalVector> rows;
  for (int j = 0; j < rank(); ++j) rows.push_back(Vector(reduced.working().change(j)));
  return Lattice(std::move(rows), scale_sq_);
}

RationalVector Lattice::Vector(std::span<Integer const> coefficients) const {
  if (static_cast<int>(coefficients.size()) != rank()) {
    throw DimensionMismatch("coefficient vector length differs from rank");
  }
  RationalVector v(ambient_dim_, 0);
  for (int j = 0; j < rank(); ++j) {
    if (coefficients[j] == 0) continue;
    Rational const c(static_cast<long>(coefficients[j]));
    for (int i = 0; i < ambient_dim_; ++i) v[i] += c * basis_[j][i];
  }
  return v;
}

Rational Lattice::NormSq(RationalVector const& v) const {
  if (static_cast<int>(v.size()) != ambient_dim_) {
    throw DimensionMismatch("vector length differs from ambient dimension");
  }
  return scale_sq_ * DotQ(v, v);
}

std::optional<IntVector> Lattice::Coordinates(RationalVector const& v) const {
  if (static_cast<int>(v.size()) != ambient_dim_) {
    throw DimensionMismatch("vector length differs from ambient dimension");
  }
  RationalMatrix const inverse = Inverse(gram_);
  RationalVector projected(rank());
  for (int j = 0; j < rank(); ++j) projected[j] = DotQ(basis_[j], v);
  IntVector coordinates(rank());
  RationalVector exact(rank(), 0);
  for (int i = 0; i < rank(); ++i) {
    for (int j = 0; j < rank(); ++j) exact[i] += inverse[i][j] * projected[j];
    if (exact[i].get_den() != 1 || !exact[i].get_num().fits_slong_p()) {
      return std::nullopt;
    }
    coordinates[i] = exact[i].get_num().get_si();
  }
  if (Vector(coordinates) != v) return std::nullopt;  // v outside the span
  return coordinates;
}

std::string Lattice::ToString() const {
  std::string s;
  for (std::size_t j = 0; j < basis_.size(); ++j) {
    if (j) s += "; ";
    for (std::size_t i = 0; i < basis_[j].size(); ++i) {
      if (i) s += ' ';
      s += freepoints::ToString(basis_[j][i]);
    }
  }
  return s;
}

namespace {

mpz_class GramDenominator(RationalMatrix const& gram) {
  mpz_class denominator = 1;
  for (auto const& row : gram) {
    for (auto const& e : row) {
      mpz_lcm(denominator.get_mpz_t(), denominator.get_mpz_t(), e.get_den_mpz_t());
    }
  }
  return denominator;
}

std::vector<Wide> IntegralGram(RationalMatrix const& gram, mpz_class const& denominator) {
  std::vector<Wide> out;
  out.reserve(gram.size() * gram.size());
  for (auto const& row : gram) {
    for (auto const& e : row) {
      mpz_class const scaled = e.get_num() * (denominator / e.get_den());
      out.push_back(ToWide(scaled));
    }
  }
  return out;
}

}  // namespace

ReducedGram::ReducedGram(Lattice const& lattice)
    : lattice_(lattice),
      denominator_(GramDenominator(lattice.gram())),
      unit_(lattice.scale_sq() / Rational(denominator_)),
      unit_ld_(0),
      working_(IntegralGram(lattice.gram(), denominator_), lattice.rank()) {
  unit_.canonicalize();
  unit_ld_ = ToLongDouble(unit_);
  working_.Lll(0, working_.rank());
}

Rational ReducedGram::ExactNormSq(std::span<Integer const> working_coefficients) const {
  return ToRational(working_.NormSq(working_coefficients)) * unit_;
}

RationalVector ReducedGram::AmbientVector(
    std::span<Integer const> working_coefficients) const {
  return lattice_.Vector(working_.ToInput(working_coefficients));
}

Lattice KernelLattice(std::span<Integer const> c) {
  int const n = static_cast<int>(c.size());
  if (n < 2) throw DomainError("kernel lattice needs at least two coordinates");
  if (!IsPrimitive(c)) throw DomainError("kernel lattice of a zero or non-primitive vector");

  // Unimodular column reduction: a·U stays equal to the reduced row.
  IntVector a(c.begin(), c.end());
  std::vector<IntVector> columns(n, IntVector(n, 0));
  for (int i = 0; i < n; ++i) columns[i][i] = 1;
  for (;;) {
    int pivot = -1;
    for (int i = 0; i < n; ++i) {
      if (a[i] != 0 && (pivot == -1 || std::llabs(a[i]) < std::llabs(a[pivot]))) pivot = i;
    }
    bool done = true;
    for (int j = 0; j < n; ++j) {
      if (j == pivot || a[j] == 0) continue;
      Integer const q = a[j] / a[pivot];
      a[j] -= q * a[pivot];
      for (int i = 0; i < n; ++i) {
        columns[j][i] = CheckedAdd(columns[j][i], -CheckedMul(q, columns[pivot][i]));
      }
      if (a[j] != 0) done = false;
    }
    if (done) break;
  }
  std::vector<IntVector> basis;
  for (int j = 0; j < n; ++j) {
    if (a[j] == 0) basis.push_back(columns[j]);
  }
  return Lattice::FromIntegers(basis).Reduced();
}

Rational DeterminantSq(Lattice const& lattice) {
  Rational scale_power = 1;
  for (int i = 0; i < lattice.rank(); ++i) scale_power *= lattice.scale_sq();
  return Determinant(lattice.gram()) * scale_power;
}

MinimaProfile SuccessiveMinima(Lattice const& lattice, Budget& budget) {
  ReducedGram reduced(lattice);
  WorkingBasis& working = reduced.working();
  int const r = lattice.rank();
  MinimaProfile profile;
  for (int k = 0; k < r; ++k) {
    if (k > 0) {
      working.AdaptToTracked(k);
      working.Lll(0, k);
      working.Lll(k, r);
    }
    auto [coefficients, norm] = ShortestOutsideSpan(working, k, budget);
    working.Track(coefficients);
    profile.minima_sq.push_back(ToRational(norm) * reduced.unit());
    profile.coordinates.push_back(working.ToInput(coefficients));
    profile.witnesses.push_back(lattice.Vector(profile.coordinates.back()));
  }
  return profile;
}

MinimaProfile SuccessiveMinima(Lattice const& lattice) {
  Budget budget;
  return SuccessiveMinima(lattice, budget);
}

Lattice Dual(Lattice const& lattice) {
  RationalMatrix const inverse = Inverse(lattice.gram());
  RationalMatrix rows = Multiply(inverse, lattice.basis());
  for (auto& row : rows) {
    for (auto& e : row) e /= lattice.scale_sq();
  }
  return Lattice(std::move(rows), lattice.scale_sq());
}

Lattice QuotientModVector(Lattice const& lattice, RationalVector const& x) {
  int const r = lattice.rank();
  if (r < 2) throw DomainError("quotient of a rank-1 lattice by a vector is trivial");
  auto coordinates = lattice.Coordinates(x);
  if (!coordinates) throw DomainError("vector is not in the lattice");
  if (!IsPrimitive(*coordinates)) throw DomainError("vector is not primitive in the lattice");

  std::vector<Wide> identity(r * r, 0);
  for (int i = 0; i < r; ++i) identity[i * r + i] = 1;
  WorkingBasis adapted(std::move(identity), r);
  adapted.Track(*coordinates);
  adapted.AdaptToTracked(1);

  Rational const x_sq = DotQ(x, x);
  std::vector<RationalVector> rows;
  for (int j = 1; j < r; ++j) {
    RationalVector v = lattice.Vector(adapted.change(j));
    Rational const t = DotQ(v, x) / x_sq;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= t * x[i];
    rows.push_back(std::move(v));
  }
  return Lattice(std::move(rows), 1 / x_sq).Reduced();
}

std::int64_t CountLatticePoints(Lattice const& lattice, Rational const& radius_sq,
                                Budget& budget) {
  if (radius_sq < 0) return 0;
  ReducedGram reduced(lattice);
  GramSchmidt const gso = reduced.working().ComputeGramSchmidt();
  Rational const gram_radius = radius_sq / reduced.unit();
  std::int64_t count = 0;
  ForEachInBall(
      gso, ToLongDouble(gram_radius),
      [&](std::span<Integer const> c, long double) {
        if (ToRational(reduced.working().NormSq(c)) <= gram_radius) ++count;
      },
      budget);
  return count;
}

bool SameLattice(Lattice const& a, Lattice const& b) {
  if (a.ambient_dim() != b.ambient_dim() || a.rank() != b.rank()) return false;
  if (a.scale_sq() != b.scale_sq()) return false;
  for (auto const& v : a.basis()) {
    if (!b.Contains(v)) return false;
  }
  for (auto const& v : b.basis()) {
    if (!a.Contains(v)) return false;
  }
  return true;
}

double UnitBallVolume(int r) {
  return std::pow(M_PI, r / 2.0) / std::tgamma(r / 2.0 + 1.0);
}

}  // namespace freepoints
