#include "plectic/catalog.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <utility>

#include "plectic/linalg.hpp"

namespace plectic {

namespace {

using Mask = MultiIndex::Mask;
using Entries = std::vector<std::pair<std::string, std::vector<std::string>>>;

Model base(const std::string& name, Chart chart, int rank) {
  Model m;
  m.name = name;
  m.chart = std::move(chart);
  m.rank = rank;
  m.connection = Connection::trivial(m.chart.dim, rank);
  return m;
}

SymForm make_form(int d, int m, int p, int q, BundleKind bundle, int fiber, const Entries& entries) {
  SymForm f = SymForm::zero(d, m, p, q, bundle, fiber);
  for (const auto& [key, comps] : entries) {
    std::vector<int> tm, alg;
    parse_index_key(key, tm, alg);
    if (static_cast<int>(comps.size()) != fiber) throw std::logic_error("catalog form entry has wrong fiber size");
    for (int c = 0; c < fiber; ++c) f.set(tm, alg, c, comps[static_cast<std::size_t>(c)]);
  }
  return f;
}

AlgebroidModel make_algebroid(int d, const std::vector<std::vector<std::string>>& anchors) {
  AlgebroidModel a;
  a.m = static_cast<int>(anchors.size());
  for (const auto& row : anchors)
    for (const auto& e : row) a.anchor.push_back(SmoothFunction::parse(e, d));
  a.structure.assign(static_cast<std::size_t>(a.m * a.m * a.m), SmoothFunction::constant(0.0, d));
  a.aconn = Connection::trivial(d, a.m);
  return a;
}

Chart periodic_box(int dim) {
  Chart c = Chart::box(dim, -std::numbers::pi, std::numbers::pi);
  c.periodic.assign(static_cast<std::size_t>(dim), true);
  return c;
}

Model e1_symplectic() {
  Model m = base("E1_symplectic", Chart::box(2, -2, 2), 1);
  m.forms["omega"] = make_form(2, 0, 2, 0, BundleKind::kE, 1, {{"0,1", {"1"}}});
  m.algebroid = make_algebroid(2, {{"-x1", "x0"}});
  m.momentum.push_back(make_form(2, 1, 0, 1, BundleKind::kE, 1, {{"|0", {"-(x0^2 + x1^2)/2"}}}));
  m.metric = Metric::euclidean(2);
  return m;
}

Model e1t_translation() {
  Model m = base("E1T_translation", Chart::box(4, -3, 3), 1);
  m.forms["omega"] = make_form(4, 0, 2, 0, BundleKind::kE, 1, {{"0,1", {"1"}}, {"2,3", {"1"}}});
  m.algebroid = make_algebroid(4, {{"1", "0", "0", "0"}});
  m.momentum.push_back(make_form(4, 1, 0, 1, BundleKind::kE, 1, {{"|0", {"x1"}}}));
  m.metric = Metric::euclidean(4);
  ZeroSet z;
  z.dim = 3;
  z.params = Chart::box(3, -1, 1);
  for (const char* e : {"x0", "0", "x1", "x2"}) z.embedding.push_back(SmoothFunction::parse(e, 3));
  m.zero_set = z;
  Quotient q;
  q.dim = 2;
  q.chart = Chart::box(2, -3, 3);
  for (const char* e : {"x2", "x3"}) q.projection.push_back(SmoothFunction::parse(e, 4));
  for (const char* e : {"0", "0", "x0", "x1"}) q.section.push_back(SmoothFunction::parse(e, 2));
  q.reduced = make_form(2, 0, 2, 0, BundleKind::kE, 1, {{"0,1", {"1"}}});
  m.quotient = q;
  return m;
}

// Flat R^4 with the self-dual triple; the anti-self-dual rotations preserve
// all three forms. Structure constants and momentum maps are solved for.
Model e2_hyperkahler() {
  Model m = base("E2_hyperkahler", Chart::box(4, -1, 1), 3);
  const int d = 4;
  auto two_form = [](std::initializer_list<std::tuple<int, int, double>> terms) {
    Eigen::Matrix4d w = Eigen::Matrix4d::Zero();
    for (const auto& [i, j, c] : terms) {
      w(i, j) += c;
      w(j, i) -= c;
    }
    return w;
  };
  const std::array<Eigen::Matrix4d, 3> omega = {two_form({{0, 1, 1}, {2, 3, 1}}), two_form({{0, 2, 1}, {1, 3, -1}}),
                                                two_form({{0, 3, 1}, {1, 2, 1}})};
  const std::array<Eigen::Matrix4d, 3> gen = {two_form({{0, 1, 1}, {2, 3, -1}}), two_form({{0, 2, 1}, {1, 3, 1}}),
                                              two_form({{0, 3, 1}, {1, 2, -1}})};
  const char* names[3] = {"omega_I", "omega_J", "omega_K"};

  auto fmt = [](double v) {
    if (std::abs(v) < 1e-14) v = 0.0;
    return "(" + format_number(v) + ")";
  };
  auto form_of = [&](const Eigen::Matrix4d& w) {
    Entries e;
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        if (w(i, j) != 0.0) e.push_back({std::to_string(i) + "," + std::to_string(j), {fmt(w(i, j))}});
    return make_form(d, 0, 2, 0, BundleKind::kScalar, 1, e);
  };
  for (int i = 0; i < 3; ++i) m.forms[names[i]] = form_of(omega[static_cast<std::size_t>(i)]);
  m.theta = {"omega_I", "omega_J", "omega_K"};

  SymForm w3 = SymForm::zero(d, 0, 2, 0, BundleKind::kE, 3);
  for (Mask jm : MultiIndex::list(d, 2)) {
    const auto ij = MultiIndex::indices(jm);
    for (int c = 0; c < 3; ++c) {
      const double v = omega[static_cast<std::size_t>(c)](ij[0], ij[1]);
      if (v != 0.0) w3.set(ij, {}, c, fmt(v));
    }
  }
  m.forms["omega"] = w3;

  // Killing fields xi_a = N_a x.
  std::vector<std::vector<std::string>> anchors;
  for (const auto& n : gen) {
    std::vector<std::string> row;
    for (int i = 0; i < d; ++i) {
      std::string s;
      for (int j = 0; j < d; ++j)
        if (n(i, j) != 0.0) s += (s.empty() ? "" : " + ") + fmt(n(i, j)) + "*x" + std::to_string(j);
      row.push_back(s.empty() ? "0" : s);
    }
    anchors.push_back(row);
  }
  m.algebroid = make_algebroid(d, anchors);

  // [xi_a, xi_b] = -[N_a, N_b] x = sum_c c^c_ab xi_c.
  Eigen::MatrixXd basis(16, 3);
  for (int c = 0; c < 3; ++c) basis.col(c) = Eigen::Map<const Eigen::VectorXd>(gen[static_cast<std::size_t>(c)].data(), 16);
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) {
      const Eigen::Matrix4d comm = -(gen[static_cast<std::size_t>(a)] * gen[static_cast<std::size_t>(b)] -
                                     gen[static_cast<std::size_t>(b)] * gen[static_cast<std::size_t>(a)]);
      const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(comm.data(), 16);
      const Eigen::VectorXd c = least_squares(basis, rhs);
      if ((basis * c - rhs).norm() > 1e-12) throw std::logic_error("rotation generators do not close");
      for (int k = 0; k < 3; ++k)
        if (std::abs(c(k)) > 1e-14) m.algebroid->set_bracket(a, b, k, fmt(c(k)));
    }

  // mu^i_a = sum_{j<=l} s_jl x_j x_l with d mu = i_{xi_a} omega_i.
  std::vector<std::pair<int, int>> mons;
  for (int j = 0; j < d; ++j)
    for (int l = j; l < d; ++l) mons.emplace_back(j, l);
  Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(16, static_cast<Eigen::Index>(mons.size()));
  for (std::size_t t = 0; t < mons.size(); ++t) {
    const auto [j, l] = mons[t];
    // d(x_j x_l)/dx_k = δ_kj x_l + δ_kl x_j; row (k, coefficient of x_r).
    sys(j * 4 + l, static_cast<Eigen::Index>(t)) += 1.0;
    sys(l * 4 + j, static_cast<Eigen::Index>(t)) += 1.0;
  }
  SymForm mu = SymForm::zero(d, 3, 0, 1, BundleKind::kE, 3);
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < 3; ++i) {
      // (i_xi w)_k = sum_r x_r sum_s N_sr W_sk
      const Eigen::Matrix4d lin = gen[static_cast<std::size_t>(a)].transpose() * omega[static_cast<std::size_t>(i)];
      Eigen::VectorXd rhs(16);
      for (int k = 0; k < d; ++k)
        for (int r = 0; r < d; ++r) rhs(k * 4 + r) = lin(r, k);
      const Eigen::VectorXd s = least_squares(sys, rhs);
      if ((sys * s - rhs).norm() > 1e-12) throw std::logic_error("rotation is not Hamiltonian for the triple");
      std::string e;
      for (std::size_t t = 0; t < mons.size(); ++t) {
        const double v = s(static_cast<Eigen::Index>(t));
        if (std::abs(v) < 1e-14) continue;
        e += (e.empty() ? "" : " + ") + fmt(v) + "*x" + std::to_string(mons[t].first) + "*x" + std::to_string(mons[t].second);
      }
      mu.set({}, {a}, i, e.empty() ? "0" : e);
    }
  m.momentum.push_back(mu);
  m.metric = Metric::euclidean(d);
  ZeroSet z;
  z.dim = 0;
  z.point = {0, 0, 0, 0};
  m.zero_set = z;
  return m;
}

Model e3_heisenberg() {
  Model m = base("E3_heisenberg", Chart::box(3, -2, 2), 3);
  m.forms["lambda_R"] =
      make_form(3, 0, 1, 0, BundleKind::kE, 3, {{"0", {"1", "0", "-x1/2"}}, {"1", {"0", "1", "x0/2"}}, {"2", {"0", "0", "1"}}});
  m.forms["omega"] = make_form(3, 0, 2, 0, BundleKind::kE, 3, {{"0,1", {"0", "0", "1"}}});
  m.algebroid = make_algebroid(3, {{"1", "0", "-x1/2"}, {"0", "1", "x0/2"}, {"0", "0", "1"}});
  m.algebroid->set_bracket(0, 1, 2, "1");
  m.momentum.push_back(make_form(3, 3, 0, 1, BundleKind::kE, 3,
                                 {{"|0", {"-1", "0", "x1"}}, {"|1", {"0", "-1", "-x0"}}, {"|2", {"0", "0", "-1"}}}));
  return m;
}

Model e4_torus4() {
  Model m = base("E4_torus4", periodic_box(4), 3);
  m.forms["omega"] =
      make_form(4, 0, 2, 0, BundleKind::kE, 3, {{"0,1", {"1", "0", "0"}}, {"1,2", {"0", "1", "0"}}, {"1,3", {"0", "0", "1"}}});
  m.algebroid = make_algebroid(4, {{"1", "0", "0", "0"}});
  m.momentum.push_back(make_form(4, 1, 0, 1, BundleKind::kE, 3, {{"|0", {"x1", "0", "0"}}}));
  m.metric = Metric::euclidean(4);
  ZeroSet z;
  z.dim = 3;
  z.params = periodic_box(3);
  for (const char* e : {"x0", "0", "x1", "x2"}) z.embedding.push_back(SmoothFunction::parse(e, 3));
  m.zero_set = z;
  Quotient q;
  q.dim = 2;
  q.chart = periodic_box(2);
  for (const char* e : {"x2", "x3"}) q.projection.push_back(SmoothFunction::parse(e, 4));
  for (const char* e : {"0", "0", "x0", "x1"}) q.section.push_back(SmoothFunction::parse(e, 2));
  q.reduced = SymForm::zero(2, 0, 2, 0, BundleKind::kE, 3);
  m.quotient = q;
  return m;
}

Model e5_curvature() {
  Model m = base("E5_curvature", Chart::box(2, -2, 2), 1);
  m.connection.coeff(1, 0, 0) = SmoothFunction::parse("x0", 2);
  m.forms["omega"] = make_form(2, 0, 2, 0, BundleKind::kEnd, 1, {{"0,1", {"1"}}});
  m.algebroid = make_algebroid(2, {{"1", "0"}, {"0", "1"}});
  return m;
}

Model e6_tautological() {
  Model m = base("E6_tautological", Chart::box(4, -1, 1), 1);
  m.connection.coeff(0, 0, 0) = SmoothFunction::parse("x0", 4);
  m.forms["theta"] = make_form(4, 0, 1, 0, BundleKind::kE, 1, {{"0", {"x2"}}, {"1", {"x3"}}});
  m.forms["omega"] =
      make_form(4, 0, 2, 0, BundleKind::kE, 1, {{"0,1", {"x0*x3"}}, {"0,2", {"-1"}}, {"1,3", {"-1"}}});
  return m;
}

}  // namespace

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"E1_symplectic", "E1T_translation", "E2_hyperkahler", "E3_heisenberg",
                                                 "E4_torus4",     "E5_curvature",    "E6_tautological"};
  return names;
}

Model builtin(const std::string& name) {
  Model m;
  if (name == "E1_symplectic")
    m = e1_symplectic();
  else if (name == "E1T_translation")
    m = e1t_translation();
  else if (name == "E2_hyperkahler")
    m = e2_hyperkahler();
  else if (name == "E3_heisenberg")
    m = e3_heisenberg();
  else if (name == "E4_torus4")
    m = e4_torus4();
  else if (name == "E5_curvature")
    m = e5_curvature();
  else if (name == "E6_tautological")
    m = e6_tautological();
  else
    throw std::invalid_argument("unknown builtin model '" + name + "'");
  m.validate();
  return m;
}

Model resolve_model(const std::string& name_or_path) {
  for (const auto& n : builtin_names())
    if (n == name_or_path) return builtin(n);
  if (std::filesystem::exists(name_or_path)) return load_model(name_or_path);
  throw std::invalid_argument("unknown model '" + name_or_path + "' (not a builtin name or an existing file)");
}

}  // namespace plectic
