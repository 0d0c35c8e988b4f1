#include <fstream>
#include <sstream>

#include "plectic/catalog.hpp"

namespace plectic {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) { throw ModelError(field + ": " + what); }

const json& require(const json& j, const std::string& key, const std::string& field) {
  if (!j.is_object() || !j.contains(key)) fail(field.empty() ? key : field + "." + key, "missing");
  return j.at(key);
}

SmoothFunction expr(const json& j, int dim, const std::string& field) {
  if (j.is_number()) return SmoothFunction::constant(j.get<double>(), dim);
  if (!j.is_string()) fail(field, "expected an expression string");
  try {
    return SmoothFunction::parse(j.get<std::string>(), dim);
  } catch (const ParseError& e) {
    fail(field, e.what());
  }
}

std::vector<SmoothFunction> expr_list(const json& j, int count, int dim, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array");
  if (static_cast<int>(j.size()) != count)
    fail(field, "expected " + std::to_string(count) + " entries, found " + std::to_string(j.size()));
  std::vector<SmoothFunction> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(expr(j[i], dim, field + "[" + std::to_string(i) + "]"));
  return out;
}

Chart chart_from(const json& j, int dim, const std::string& field) {
  Chart c = Chart::box(dim, -1, 1);
  if (j.contains("box")) {
    const json& b = j.at("box");
    if (!b.is_array() || static_cast<int>(b.size()) != dim) fail(field + ".box", "expected one [lo, hi] pair per coordinate");
    for (int i = 0; i < dim; ++i) {
      const json& r = b[static_cast<std::size_t>(i)];
      if (!r.is_array() || r.size() != 2) fail(field + ".box[" + std::to_string(i) + "]", "expected [lo, hi]");
      c.lo[static_cast<std::size_t>(i)] = r[0].get<double>();
      c.hi[static_cast<std::size_t>(i)] = r[1].get<double>();
    }
  }
  if (j.contains("periodic")) {
    const json& p = j.at("periodic");
    if (!p.is_array() || static_cast<int>(p.size()) != dim) fail(field + ".periodic", "expected one flag per coordinate");
    for (int i = 0; i < dim; ++i) c.periodic[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)].get<bool>();
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    fail(field.empty() ? "box" : field + ".box", e.what());
  }
  return c;
}

json chart_to(const Chart& c) {
  json box = json::array();
  for (int i = 0; i < c.dim; ++i) box.push_back({c.lo[static_cast<std::size_t>(i)], c.hi[static_cast<std::size_t>(i)]});
  json per = json::array();
  for (bool b : c.periodic) per.push_back(b);
  return {{"box", box}, {"periodic", per}};
}

SymForm form_from(const json& j, int d, int m, BundleKind default_bundle, int rank, const std::string& field) {
  int p = 0, q = 0;
  if (j.contains("bidegree")) {
    const json& b = j.at("bidegree");
    if (!b.is_array() || b.size() != 2) fail(field + ".bidegree", "expected [p, q]");
    p = b[0].get<int>();
    q = b[1].get<int>();
  } else {
    p = require(j, "degree", field).get<int>();
  }
  BundleKind kind = default_bundle;
  if (j.contains("bundle")) {
    try {
      kind = bundle_kind_from(j.at("bundle").get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail(field + ".bundle", e.what());
    }
  }
  const int fiber = kind == BundleKind::kE ? rank : (kind == BundleKind::kEnd ? rank * rank : 1);
  if (p < 0 || p > d) fail(field, "TM degree out of range");
  if (q < 0 || (q > 0 && q > m)) fail(field, "algebroid degree out of range");
  SymForm f = SymForm::zero(d, q > 0 ? m : 0, p, q, kind, fiber);
  const json& coeffs = require(j, "coeffs", field);
  if (!coeffs.is_object()) fail(field + ".coeffs", "expected an object keyed by multi-index");
  for (const auto& [key, val] : coeffs.items()) {
    const std::string cf = field + ".coeffs[\"" + key + "\"]";
    std::vector<int> tm, alg;
    try {
      parse_index_key(key, tm, alg);
    } catch (const std::invalid_argument& e) {
      fail(cf, e.what());
    }
    for (int i : tm)
      if (i >= d) fail(cf, "TM index out of range");
    for (int a : alg)
      if (a >= m) fail(cf, "algebroid index out of range");
    if (static_cast<int>(tm.size()) != p || static_cast<int>(alg.size()) != q) fail(cf, "index does not match the bidegree");
    const auto comps = expr_list(val, fiber, d, cf);
    MultiIndex::Mask tmask = 0, amask = 0;
    for (int i : tm) tmask |= MultiIndex::Mask{1} << i;
    for (int a : alg) amask |= MultiIndex::Mask{1} << a;
    for (int c = 0; c < fiber; ++c)
      f.at(MultiIndex::rank(d, tmask), MultiIndex::rank(f.m, amask), c) = comps[static_cast<std::size_t>(c)];
  }
  return f;
}

json form_to(const SymForm& f) {
  json j;
  if (f.q > 0)
    j["bidegree"] = {f.p, f.q};
  else
    j["degree"] = f.p;
  j["bundle"] = to_string(f.bundle);
  json coeffs = json::object();
  for (MultiIndex::Mask tm : MultiIndex::list(f.d, f.p))
    for (MultiIndex::Mask am : MultiIndex::list(f.m, f.q)) {
      const int tr = MultiIndex::rank(f.d, tm);
      const int ar = MultiIndex::rank(f.m, am);
      bool any = false;
      json comps = json::array();
      for (int c = 0; c < f.fiber; ++c) {
        const SmoothFunction& e = f.at(tr, ar, c);
        any = any || !e.is_zero();
        comps.push_back(e.print());
      }
      if (any) coeffs[index_key(tm, am, f.q > 0)] = comps;
    }
  j["coeffs"] = coeffs;
  return j;
}

json expr_array(const std::vector<SmoothFunction>& fs) {
  json a = json::array();
  for (const auto& f : fs) a.push_back(f.print());
  return a;
}

}  // namespace

void parse_index_key(const std::string& key, std::vector<int>& tm, std::vector<int>& alg) {
  tm.clear();
  alg.clear();
  const auto bar = key.find('|');
  auto parse_part = [](const std::string& s, std::vector<int>& out) {
    if (s.empty()) return;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("malformed multi-index '" + s + "'");
      const int v = std::stoi(tok);
      if (!out.empty() && v <= out.back()) throw std::invalid_argument("multi-index must be strictly increasing");
      out.push_back(v);
    }
  };
  parse_part(key.substr(0, bar), tm);
  if (bar != std::string::npos) parse_part(key.substr(bar + 1), alg);
}

std::string index_key(MultiIndex::Mask tm, MultiIndex::Mask alg, bool mixed) {
  std::string k = MultiIndex::to_string(tm);
  if (mixed) k += "|" + MultiIndex::to_string(alg);
  return k;
}

Model model_from_json(const json& j) {
  Model m;
  m.name = require(j, "name", "").get<std::string>();
  const int d = require(j, "dim", "").get<int>();
  if (d < 1 || d > kMaxDim) fail("dim", "must be between 1 and " + std::to_string(kMaxDim));
  m.chart = chart_from(j, d, "");

  const json& b = require(j, "bundle", "");
  m.rank = require(b, "rank", "bundle").get<int>();
  if (m.rank < 1) fail("bundle.rank", "must be positive");
  m.connection = Connection::trivial(d, m.rank);
  if (b.contains("connection")) {
    const json& c = b.at("connection");
    if (!c.is_array() || static_cast<int>(c.size()) != d) fail("bundle.connection", "expected one row per coordinate");
    for (int i = 0; i < d; ++i) {
      const auto row = expr_list(c[static_cast<std::size_t>(i)], m.rank * m.rank, d, "bundle.connection[" + std::to_string(i) + "]");
      for (int k = 0; k < m.rank * m.rank; ++k) m.connection.a[static_cast<std::size_t>(i * m.rank * m.rank + k)] = row[static_cast<std::size_t>(k)];
    }
  }

  if (j.contains("metric")) {
    const json& g = j.at("metric");
    if (!g.is_array() || static_cast<int>(g.size()) != d) fail("metric", "expected d rows");
    Metric met;
    met.dim = d;
    for (int i = 0; i < d; ++i) {
      const auto row = expr_list(g[static_cast<std::size_t>(i)], d, d, "metric[" + std::to_string(i) + "]");
      met.g.insert(met.g.end(), row.begin(), row.end());
    }
    m.metric = met;
  }

  int rank_a = 0;
  if (j.contains("algebroid")) {
    const json& a = j.at("algebroid");
    AlgebroidModel alg;
    alg.m = rank_a = require(a, "rank", "algebroid").get<int>();
    if (rank_a < 1 || rank_a > kMaxDim) fail("algebroid.rank", "out of range");
    const json& anchor = require(a, "anchor", "algebroid");
    if (!anchor.is_array()) fail("algebroid.anchor", "expected an array of rows");
    for (int r = 0; r < rank_a; ++r) {
      const std::string field = "algebroid.anchor[" + std::to_string(r) + "]";
      if (r >= static_cast<int>(anchor.size())) fail(field, "missing");
      const auto row = expr_list(anchor[static_cast<std::size_t>(r)], d, d, field);
      alg.anchor.insert(alg.anchor.end(), row.begin(), row.end());
    }
    if (static_cast<int>(anchor.size()) != rank_a) fail("algebroid.anchor", "expected exactly rank rows");
    alg.structure.assign(static_cast<std::size_t>(rank_a * rank_a * rank_a), SmoothFunction::constant(0.0, d));
    if (a.contains("structure")) {
      const json& s = a.at("structure");
      if (!s.is_array() || static_cast<int>(s.size()) != rank_a) fail("algebroid.structure", "expected rank x rank x rank");
      for (int x = 0; x < rank_a; ++x) {
        const json& sx = s[static_cast<std::size_t>(x)];
        if (!sx.is_array() || static_cast<int>(sx.size()) != rank_a)
          fail("algebroid.structure[" + std::to_string(x) + "]", "expected rank rows");
        for (int y = 0; y < rank_a; ++y) {
          const auto row = expr_list(sx[static_cast<std::size_t>(y)], rank_a, d,
                                     "algebroid.structure[" + std::to_string(x) + "][" + std::to_string(y) + "]");
          for (int z = 0; z < rank_a; ++z)
            alg.structure[static_cast<std::size_t>((x * rank_a + y) * rank_a + z)] = row[static_cast<std::size_t>(z)];
        }
      }
    }
    alg.aconn = Connection::trivial(d, rank_a);
    if (a.contains("aconn")) {
      const json& c = a.at("aconn");
      if (!c.is_array() || static_cast<int>(c.size()) != d) fail("algebroid.aconn", "expected one row per coordinate");
      for (int i = 0; i < d; ++i) {
        const auto row = expr_list(c[static_cast<std::size_t>(i)], rank_a * rank_a, d, "algebroid.aconn[" + std::to_string(i) + "]");
        for (int k = 0; k < rank_a * rank_a; ++k) alg.aconn.a[static_cast<std::size_t>(i * rank_a * rank_a + k)] = row[static_cast<std::size_t>(k)];
      }
    }
    m.algebroid = alg;
  }

  if (j.contains("forms")) {
    for (const auto& [name, f] : j.at("forms").items())
      m.forms[name] = form_from(f, d, rank_a, BundleKind::kE, m.rank, "forms." + name);
  }
  if (j.contains("momentum")) {
    const json& mu = j.at("momentum");
    if (!mu.is_array()) fail("momentum", "expected a list of components");
    for (std::size_t k = 0; k < mu.size(); ++k)
      m.momentum.push_back(form_from(mu[k], d, rank_a, BundleKind::kE, m.rank, "momentum[" + std::to_string(k) + "]"));
  }
  if (j.contains("zero_set")) {
    const json& z = j.at("zero_set");
    ZeroSet zs;
    zs.dim = require(z, "dim", "zero_set").get<int>();
    if (zs.dim == 0) {
      zs.point = require(z, "point", "zero_set").get<std::vector<double>>();
    } else {
      zs.params = chart_from(z, zs.dim, "zero_set");
      zs.embedding = expr_list(require(z, "embedding", "zero_set"), d, zs.dim, "zero_set.embedding");
    }
    m.zero_set = zs;
  }
  if (j.contains("quotient")) {
    const json& q = j.at("quotient");
    Quotient qt;
    qt.dim = require(q, "dim", "quotient").get<int>();
    qt.chart = chart_from(q, qt.dim, "quotient");
    qt.projection = expr_list(require(q, "projection", "quotient"), qt.dim, d, "quotient.projection");
    qt.section = expr_list(require(q, "section", "quotient"), d, qt.dim, "quotient.section");
    qt.reduced = form_from(require(q, "reduced", "quotient"), qt.dim, 0, BundleKind::kE, m.rank, "quotient.reduced");
    m.quotient = qt;
  }
  if (j.contains("theta")) m.theta = j.at("theta").get<std::vector<std::string>>();
  try {
    m.validate();
  } catch (const ModelError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ModelError(e.what());
  }
  return m;
}

json model_to_json(const Model& m) {
  const int d = m.chart.dim;
  json j = chart_to(m.chart);
  j["name"] = m.name;
  j["dim"] = d;
  json conn = json::array();
  for (int i = 0; i < d; ++i) {
    std::vector<SmoothFunction> row(m.connection.a.begin() + i * m.rank * m.rank,
                                    m.connection.a.begin() + (i + 1) * m.rank * m.rank);
    conn.push_back(expr_array(row));
  }
  j["bundle"] = {{"rank", m.rank}, {"connection", conn}};
  if (m.metric) {
    json g = json::array();
    for (int i = 0; i < d; ++i) {
      json row = json::array();
      for (int k = 0; k < d; ++k) row.push_back(m.metric->entry(i, k).print());
      g.push_back(row);
    }
    j["metric"] = g;
  }
  if (m.algebroid) {
    const auto& a = *m.algebroid;
    json anchor = json::array();
    for (int r = 0; r < a.m; ++r) {
      std::vector<SmoothFunction> row(a.anchor.begin() + r * d, a.anchor.begin() + (r + 1) * d);
      anchor.push_back(expr_array(row));
    }
    json s = json::array();
    for (int x = 0; x < a.m; ++x) {
      json sx = json::array();
      for (int y = 0; y < a.m; ++y) {
        json row = json::array();
        for (int z = 0; z < a.m; ++z) row.push_back(a.c(x, y, z).print());
        sx.push_back(row);
      }
      s.push_back(sx);
    }
    json ac = json::array();
    for (int i = 0; i < d; ++i) {
      std::vector<SmoothFunction> row(a.aconn.a.begin() + i * a.m * a.m, a.aconn.a.begin() + (i + 1) * a.m * a.m);
      ac.push_back(expr_array(row));
    }
    j["algebroid"] = {{"rank", a.m}, {"anchor", anchor}, {"structure", s}, {"aconn", ac}};
  }
  json forms = json::object();
  for (const auto& [name, f] : m.forms) forms[name] = form_to(f);
  j["forms"] = forms;
  if (!m.momentum.empty()) {
    json mu = json::array();
    for (const auto& f : m.momentum) mu.push_back(form_to(f));
    j["momentum"] = mu;
  }
  if (m.zero_set) {
    json z;
    z["dim"] = m.zero_set->dim;
    if (m.zero_set->dim == 0) {
      z["point"] = m.zero_set->point;
    } else {
      z.update(chart_to(m.zero_set->params));
      z["embedding"] = expr_array(m.zero_set->embedding);
    }
    j["zero_set"] = z;
  }
  if (m.quotient) {
    json q = chart_to(m.quotient->chart);
    q["dim"] = m.quotient->dim;
    q["projection"] = expr_array(m.quotient->projection);
    q["section"] = expr_array(m.quotient->section);
    q["reduced"] = form_to(m.quotient->reduced);
    j["quotient"] = q;
  }
  if (!m.theta.empty()) j["theta"] = m.theta;
  return j;
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError(path + ": cannot open");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ModelError(path + ": " + e.what());
  }
  try {
    return model_from_json(j);
  } catch (const json::exception& e) {
    throw ModelError(path + ": " + e.what());
  }
}

void save_model(const Model& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot write");
  out << model_to_json(model).dump(2) << "\n";
}

}  // namespace plectic
