#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "migstock/components.hpp"

#include <nlohmann/json.hpp>

using namespace migstock;

namespace {

// Independent oracle: cyclic Jacobi eigendecomposition of a symmetric
// matrix, eigenpairs sorted by descending eigenvalue. Deliberately not the
// code path used by compute_components.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> jacobi_eigen(Eigen::MatrixXd a) {
  const int n = static_cast<int>(a.rows());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (off < 1e-32) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        double phi = 0.5 * std::atan2(2.0 * a(p, q), a(q, q) - a(p, p));
        double c = std::cos(phi), s = std::sin(phi);
        for (int k = 0; k < n; ++k) {
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) > a(j, j); });
  Eigen::VectorXd evals(n);
  Eigen::MatrixXd evecs(n, n);
  for (int i = 0; i < n; ++i) {
    evals(i) = a(order[i], order[i]);
    evecs.col(i) = v.col(order[i]);
  }
  return {evals, evecs};
}

// Angle between a unit vector and a line (sign-free), sine-based so tiny
// angles stay resolvable.
double vector_angle(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  Eigen::VectorXd a = u.normalized(), b = v.normalized();
  if (a.dot(b) < 0) b = -b;
  Eigen::VectorXd resid = b - a * a.dot(b);
  return std::asin(std::min(1.0, resid.norm()));
}

// Largest principal angle between span{a1,a2} and span{b1,b2}, sine-based:
// the spectral norm of (I - A A^T) B.
double max_principal_angle(const Eigen::VectorXd& a1, const Eigen::VectorXd& a2,
                           const Eigen::VectorXd& b1, const Eigen::VectorXd& b2) {
  Eigen::MatrixXd a(a1.size(), 2), b(b1.size(), 2);
  a.col(0) = a1.normalized();
  a.col(1) = (a2 - a1.normalized() * a1.normalized().dot(a2)).normalized();
  b.col(0) = b1.normalized();
  b.col(1) = (b2 - b1.normalized() * b1.normalized().dot(b2)).normalized();
  Eigen::MatrixXd resid = b - a * (a.transpose() * b);
  Eigen::Matrix2d g = resid.transpose() * resid;
  double tr = g.trace(), det = g.determinant();
  double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  double lmax = tr / 2.0 + disc;
  return std::asin(std::min(1.0, std::sqrt(std::max(0.0, lmax))));
}

LogScheduleMatrix matrix_from(const Eigen::MatrixXd& x) {
  LogScheduleMatrix m;
  m.values = x;
  for (int r = 0; r < x.rows(); ++r) m.rows.push_back({0, 2000 + r});
  m.region_codes = {"AA"};
  for (int c = 0; c < x.cols(); ++c) m.age_labels.push_back("col" + std::to_string(c));
  m.missing.assign(static_cast<std::size_t>(x.rows()) * x.cols(), 0);
  return m;
}

MigrantPanel synthetic_survey_panel(int n_regions, int year_from, int year_to, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dp(0.005, 0.2);
  std::vector<Region> regions;
  for (int i = 0; i < n_regions; ++i) {
    std::string code = "S" + std::to_string(100 + i);
    regions.push_back({code, code});
  }
  std::vector<Observation> obs;
  for (int r = 0; r < n_regions; ++r) {
    for (int y = year_from; y <= year_to; ++y) {
      for (int a = 0; a < kNumAgeGroups; ++a) {
        Observation o;
        o.age = a;
        o.year = y;
        o.region = r;
        o.proportion = dp(gen);
        o.se = 0.01;
        o.source = Source::survey;
        obs.push_back(o);
      }
    }
  }
  return MigrantPanel("x", regions, obs);
}

}  // namespace

TEST_CASE("reference configuration: 51 regions x 16 years -> 816 x 9") {
  MigrantPanel panel = synthetic_survey_panel(51, 2001, 2016, 12);
  LogScheduleMatrix m = build_log_matrix(panel, 2001, 2016);
  CHECK(m.values.rows() == 816);
  CHECK(m.values.cols() == 9);
  CHECK(m.complete());
  for (int r = 0; r < m.values.rows(); ++r) {
    for (int c = 0; c < 9; ++c) CHECK(m.values(r, c) < 0.0);
  }
}

TEST_CASE("single region-year gives a 1 x 9 matrix; absent cells are masked") {
  MigrantPanel panel = synthetic_survey_panel(1, 2010, 2010, 3);
  LogScheduleMatrix m = build_log_matrix(panel, 2010, 2010);
  CHECK(m.values.rows() == 1);
  CHECK(m.values.cols() == 9);

  // drop one age cell
  std::vector<Observation> obs(panel.observations().begin(), panel.observations().end() - 1);
  MigrantPanel partial("x", panel.regions(), obs);
  LogScheduleMatrix m2 = build_log_matrix(partial, 2010, 2010);
  CHECK(m2.is_missing(0, 8));
  CHECK(!m2.is_missing(0, 0));
}

TEST_CASE("empty year selection is rejected") {
  MigrantPanel panel = synthetic_survey_panel(2, 2005, 2008, 4);
  try {
    build_log_matrix(panel, 1990, 1995);
    FAIL("expected EmptySelection");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::empty_selection);
  }
  CHECK_THROWS_AS(build_log_matrix(panel, 2008, 2005), Error);
}

TEST_CASE("impute_missing") {
  // complete matrix unchanged
  Eigen::MatrixXd x(2, 3);
  x << -1, -2, -3, -4, -5, -6;
  LogScheduleMatrix m = matrix_from(x);
  LogScheduleMatrix full = impute_missing(m);
  CHECK(full.values == m.values);

  // one missing cell in a series with observed {-2, -4} imputes -3
  Eigen::MatrixXd y(3, 2);
  y << -2, -1, -4, -1.5, 0, -2;
  LogScheduleMatrix m2 = matrix_from(y);
  m2.missing[2 * 2 + 0] = 1;  // row 2, col 0 (same region => same series)
  LogScheduleMatrix f2 = impute_missing(m2);
  CHECK(f2.values(2, 0) == doctest::Approx(-3.0));
  CHECK(f2.is_missing(2, 0));  // mask preserved

  // fully missing column -> EmptyColumn
  LogScheduleMatrix m3 = matrix_from(y);
  m3.missing[0 * 2 + 1] = m3.missing[1 * 2 + 1] = m3.missing[2 * 2 + 1] = 1;
  try {
    impute_missing(m3);
    FAIL("expected EmptyColumn");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::empty_column);
  }

  // column fallback: missing cell whose series has no other observation
  Eigen::MatrixXd z(2, 2);
  z << -2, -1, -6, -3;
  LogScheduleMatrix m4 = matrix_from(z);
  m4.rows = {{0, 2000}, {1, 2000}};  // two different regions
  m4.region_codes = {"AA", "BB"};
  m4.missing[1 * 2 + 0] = 1;  // region BB has no other value in column 0
  LogScheduleMatrix f4 = impute_missing(m4);
  CHECK(f4.values(1, 0) == doctest::Approx(-2.0));  // column mean of observed
}

TEST_CASE("diagonal 2x2: singular values and axes") {
  Eigen::MatrixXd x(2, 2);
  x << 3, 0, 0, 2;
  PrincipalComponents pc = compute_components(matrix_from(x));
  CHECK(pc.singular1 == doctest::Approx(3.0));
  CHECK(pc.singular2 == doctest::Approx(2.0));
  // sign convention: sum(z1) <= 0 so z1 = -e1; last entry of z2 >= 0 so z2 = +e2
  CHECK(pc.z1(0) == doctest::Approx(-1.0));
  CHECK(std::abs(pc.z1(1)) < 1e-14);
  CHECK(pc.z2(1) == doctest::Approx(1.0));
  CHECK(std::abs(pc.z2(0)) < 1e-14);
}

TEST_CASE("rank-1 matrix is degenerate") {
  Eigen::VectorXd u(4), v(3);
  u << 1, 2, 3, 4;
  v << 0.6, -0.64, 0.48;
  Eigen::MatrixXd x = u * v.transpose();
  try {
    compute_components(matrix_from(x));
    FAIL("expected DegenerateMatrix");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::degenerate_matrix);
  }
}

TEST_CASE("random matrices match the Gram-matrix eigendecomposition oracle") {
  std::mt19937_64 gen(2024);
  std::normal_distribution<double> dn(0.0, 1.0);
  for (int rep = 0; rep < 100; ++rep) {
    Eigen::MatrixXd x(20, 9);
    for (int i = 0; i < x.size(); ++i) x(i / 9, i % 9) = dn(gen) - 2.0;
    PrincipalComponents pc = compute_components(matrix_from(x));

    // orthonormality
    CHECK(std::abs(pc.z1.norm() - 1.0) < 1e-10);
    CHECK(std::abs(pc.z2.norm() - 1.0) < 1e-10);
    CHECK(std::abs(pc.z1.dot(pc.z2)) < 1e-10);
    CHECK(pc.z1.sum() <= 1e-14);
    CHECK(pc.z2(8) >= -1e-14);

    auto [evals, evecs] = jacobi_eigen(x.transpose() * x);
    CHECK(pc.singular1 == doctest::Approx(std::sqrt(evals(0))).epsilon(1e-10));
    CHECK(pc.singular2 == doctest::Approx(std::sqrt(evals(1))).epsilon(1e-10));
    // per-vector principal angle (up to sign)
    CHECK(vector_angle(pc.z1, evecs.col(0)) < 1e-8);
    CHECK(vector_angle(pc.z2, evecs.col(1)) < 1e-8);

    // oracle self-check: full reconstruction from the Gram eigensystem
    Eigen::MatrixXd recon = Eigen::MatrixXd::Zero(20, 9);
    for (int k = 0; k < 9; ++k) {
      double s = std::sqrt(std::max(0.0, evals(k)));
      if (s < 1e-12) continue;
      Eigen::VectorXd uk = x * evecs.col(k) / s;
      recon += s * uk * evecs.col(k).transpose();
    }
    CHECK((recon - x).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("rank-2 self-consistency recovers the generating span") {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> dn(0.0, 1.0);
  Eigen::VectorXd z1(9), z2(9);
  for (int i = 0; i < 9; ++i) {
    z1(i) = -std::abs(dn(gen)) - 0.1;
    z2(i) = dn(gen);
  }
  z1.normalize();
  z2 -= z1 * z1.dot(z2);
  z2.normalize();
  Eigen::MatrixXd x(30, 9);
  for (int r = 0; r < 30; ++r) {
    double b1 = 5.0 + dn(gen), b2 = 0.5 * dn(gen);
    x.row(r) = (b1 * z1 + b2 * z2).transpose();
  }
  PrincipalComponents pc = compute_components(matrix_from(x));
  CHECK(max_principal_angle(pc.z1, pc.z2, z1, z2) < 1e-8);
}

TEST_CASE("sign convention is idempotent and deterministic") {
  std::mt19937_64 gen(6);
  std::normal_distribution<double> dn(0.0, 1.0);
  Eigen::MatrixXd x(15, 9);
  for (int i = 0; i < x.size(); ++i) x(i / 9, i % 9) = dn(gen) - 1.0;
  PrincipalComponents a = compute_components(matrix_from(x));
  PrincipalComponents b = compute_components(matrix_from(x));
  CHECK(a.z1 == b.z1);
  CHECK(a.z2 == b.z2);
  // convention holds
  CHECK(a.z1.sum() <= 1e-14);
  CHECK(a.z2(8) >= -1e-14);
}

TEST_CASE("components serialize to json and back") {
  MigrantPanel panel = synthetic_survey_panel(5, 2001, 2008, 9);
  PrincipalComponents pc = compute_components(build_log_matrix(panel, 2001, 2008));
  nlohmann::json j = pc.to_json();
  PrincipalComponents back = PrincipalComponents::from_json(j);
  CHECK((back.z1 - pc.z1).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.z2 - pc.z2).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.singular1 == pc.singular1);
  CHECK(back.age_labels == pc.age_labels);
}
