#include "levilab/spec_io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "levilab/errors.hpp"

namespace levilab {

namespace {

struct Entry {
  std::string key;
  std::string value;
  std::size_t line;
  std::size_t key_column;
  std::size_t value_column;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// Trims [b, e) of `s`, returning the trimmed begin offset.
std::size_t trim(const std::string& s, std::size_t b, std::size_t e, std::string& out) {
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  out = s.substr(b, e - b);
  return b;
}

class Entries {
 public:
  void add(Entry e) {
    if (index_.count(e.key)) throw ParseError("duplicate key '" + e.key + "'", e.line, e.key_column);
    index_[e.key] = entries_.size();
    entries_.push_back(std::move(e));
  }
  const Entry* find(const std::string& key) {
    auto it = index_.find(key);
    if (it == index_.end()) return nullptr;
    used_.insert(key);
    return &entries_[it->second];
  }
  const Entry& require(const std::string& key, const Entry& anchor) {
    const Entry* e = find(key);
    if (!e) throw ParseError("missing key '" + key + "'", anchor.line, anchor.key_column);
    return *e;
  }
  void reject_unused(const std::string& family) const {
    for (const Entry& e : entries_)
      if (!used_.count(e.key))
        throw ParseError("unknown key '" + e.key + "' for family " + family, e.line, e.key_column);
  }

 private:
  std::vector<Entry> entries_;
  std::map<std::string, std::size_t> index_;
  std::set<std::string> used_;
};

double parse_double(const std::string& text, std::size_t line, std::size_t column) {
  std::string t;
  const std::size_t off = trim(text, 0, text.size(), t);
  double v = 0.0;
  const char* b = t.data();
  const char* e = t.data() + t.size();
  if (!t.empty() && *b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (t.empty() || ec != std::errc() || ptr != e)
    throw ParseError("malformed number '" + t + "'", line, column + off);
  return v;
}

long parse_integer(const std::string& text, std::size_t line, std::size_t column) {
  std::string t;
  const std::size_t off = trim(text, 0, text.size(), t);
  long v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw ParseError("malformed integer '" + t + "'", line, column + off);
  return v;
}

bool parse_bool(const Entry& e) {
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  throw ParseError("expected true or false, got '" + e.value + "'", e.line, e.value_column);
}

// Splits `text` on `sep`, returning pieces with their column offsets.
std::vector<std::pair<std::string, std::size_t>> split(const std::string& text, char sep) {
  std::vector<std::pair<std::string, std::size_t>> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == sep) {
      out.emplace_back(text.substr(start, i - start), start);
      start = i + 1;
    }
  }
  return out;
}

std::vector<double> parse_list(const std::string& text, std::size_t line, std::size_t column) {
  std::vector<double> v;
  for (const auto& [piece, off] : split(text, ',')) v.push_back(parse_double(piece, line, column + off));
  return v;
}

std::vector<int> parse_int_list(const std::string& text, std::size_t line, std::size_t column) {
  std::vector<int> v;
  for (const auto& [piece, off] : split(text, ',')) v.push_back(int(parse_integer(piece, line, column + off)));
  return v;
}

double number(Entries& es, const std::string& key, double fallback) {
  const Entry* e = es.find(key);
  return e ? parse_double(e->value, e->line, e->value_column) : fallback;
}

double required_number(Entries& es, const std::string& key, const Entry& anchor) {
  const Entry& e = es.require(key, anchor);
  return parse_double(e.value, e.line, e.value_column);
}

// Tracks the complex dimension n from explicit and implied sources.
class DimensionInference {
 public:
  void imply(int n, const Entry& e, const std::string& source) {
    if (n < 1) throw ParseError(source + " implies n = " + std::to_string(n) + " < 1", e.line, e.value_column);
    if (n_ && *n_ != n)
      throw ParseError("dimension mismatch: " + source + " implies n = " + std::to_string(n) + " but n = " +
                           std::to_string(*n_) + " from " + source_,
                       e.line, e.value_column);
    n_ = n;
    source_ = source;
  }
  int value(int fallback) const { return n_.value_or(fallback); }

 private:
  std::optional<int> n_;
  std::string source_;
};

int real_length_to_n(std::size_t len) { return len % 2 == 0 ? int(len / 2) - 1 : -1; }

SurfaceSpec build(Entries& es, const Entry& family_entry) {
  const std::string family = family_entry.value;
  DimensionInference dim;
  if (const Entry* e = es.find("n")) dim.imply(int(parse_integer(e->value, e->line, e->value_column)), *e, "n");

  std::vector<double> center;
  if (const Entry* e = es.find("center")) {
    center = parse_list(e->value, e->line, e->value_column);
    dim.imply(real_length_to_n(center.size()), *e, "center");
  }
  Reparametrization reparam = Reparametrization::none;
  if (const Entry* e = es.find("reparam")) {
    if (e->value == "exp")
      reparam = Reparametrization::exponential;
    else if (e->value != "none")
      throw ParseError("reparam must be none or exp", e->line, e->value_column);
  }
  std::string name;
  if (const Entry* e = es.find("name")) name = e->value;

  Family fam;
  int n_fallback = 1;
  if (family == "sphere") {
    fam = SphereFamily{number(es, "R", 1.0)};
  } else if (family == "ellipsoid") {
    const Entry& e = es.require("axes", family_entry);
    std::vector<double> axes = parse_list(e.value, e.line, e.value_column);
    dim.imply(real_length_to_n(axes.size()), e, "axes");
    double scale = 1.0;
    if (const Entry* ne = es.find("normalization")) {
      if (ne->value == "dirichlet") {
        for (double a : axes)
          if (!(a > 0.0)) throw ParseError("semi-axes must be positive", e.line, e.value_column);
        scale = dirichlet_scale(axes);
      } else if (ne->value != "unit") {
        throw ParseError("normalization must be unit or dirichlet", ne->line, ne->value_column);
      }
    }
    fam = EllipsoidFamily{std::move(axes), scale};
  } else if (family == "quadric" || family == "perturbed_quadric") {
    PerturbedQuadricFamily q{number(es, "c", 1.0), {}};
    if (const Entry* e = es.find("h")) {
      for (const auto& [term, off] : split(e->value, ';')) {
        std::string t;
        if (trim(term, 0, term.size(), t); t.empty()) continue;
        const std::vector<double> v = parse_list(term, e->line, e->value_column + off);
        if (v.size() < 4)
          throw ParseError("h term needs re,im and one power per coordinate", e->line, e->value_column + off);
        HoloTerm h{{v[0], v[1]}, {}};
        for (std::size_t i = 2; i < v.size(); ++i) {
          if (v[i] != std::floor(v[i]) || v[i] < 0)
            throw ParseError("h powers must be nonnegative integers", e->line, e->value_column + off);
          h.powers.push_back(int(v[i]));
        }
        dim.imply(int(h.powers.size()) - 1, *e, "h");
        q.h.push_back(std::move(h));
      }
    }
    fam = std::move(q);
  } else if (family == "cylinder") {
    const Entry& e = es.require("coords", family_entry);
    fam = CylinderFamily{parse_int_list(e.value, e.line, e.value_column), number(es, "R", 1.0)};
  } else if (family == "reinhardt") {
    dim.imply(1, family_entry, "family reinhardt");
    const double k = required_number(es, "k", family_entry);
    const double s0 = required_number(es, "s0", family_entry);
    const double f0 = required_number(es, "f0", family_entry);
    const double fp0 = required_number(es, "fp0", family_entry);
    const double smin = required_number(es, "smin", family_entry);
    const double smax = required_number(es, "smax", family_entry);
    ProfileOptions opts;
    if (const Entry* e = es.find("extend")) opts.extend = parse_bool(*e);
    opts.rtol = number(es, "rtol", opts.rtol);
    opts.atol = number(es, "atol", opts.atol);
    fam = ReinhardtFamily{std::make_shared<const ReinhardtProfile>(k, s0, f0, fp0, smin, smax, opts)};
  } else if (family == "polynomial") {
    PolynomialFamily p;
    const Entry& e = es.require("terms", family_entry);
    for (const auto& [term, off] : split(e.value, ';')) {
      std::string t;
      if (trim(term, 0, term.size(), t); t.empty()) continue;
      const auto parts = split(term, '|');
      const std::size_t col = e.value_column + off;
      if (parts.size() != 3) throw ParseError("polynomial term must be re,im|a..|b..", e.line, col);
      const std::vector<double> c = parse_list(parts[0].first, e.line, col + parts[0].second);
      if (c.size() != 2) throw ParseError("coefficient must be re,im", e.line, col);
      PolyTerm pt{{c[0], c[1]},
                  parse_int_list(parts[1].first, e.line, col + parts[1].second),
                  parse_int_list(parts[2].first, e.line, col + parts[2].second)};
      if (pt.zpow.size() != pt.zbarpow.size())
        throw ParseError("z and zbar exponent lists differ in length", e.line, col);
      dim.imply(int(pt.zpow.size()) - 1, e, "terms");
      p.terms.push_back(std::move(pt));
    }
    p.length = number(es, "length", 1.0);
    if (const Entry* s = es.find("star")) p.star_shaped = parse_bool(*s);
    fam = std::move(p);
  } else {
    throw ParseError("unknown family '" + family + "'", family_entry.line, family_entry.value_column);
  }
  es.reject_unused(family);
  return SurfaceSpec(dim.value(n_fallback), std::move(fam), std::move(center), reparam, std::move(name));
}

Entries parse_lines(const std::string& text) {
  Entries es;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::string content;
    const std::size_t b = trim(raw, 0, raw.size(), content);
    if (content.empty()) continue;
    const auto eq = raw.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", line, b + 1);
    Entry e;
    e.line = line;
    e.key_column = trim(raw, 0, eq, e.key) + 1;
    e.value_column = trim(raw, eq + 1, raw.size(), e.value) + 1;
    if (e.key.empty()) throw ParseError("empty key", line, b + 1);
    es.add(std::move(e));
  }
  return es;
}

}  // namespace

SurfaceSpec parse_surface_text(const std::string& text) {
  Entries es = parse_lines(text);
  const Entry* fam = es.find("family");
  if (!fam) throw ParseError("missing key 'family'", 1, 1);
  const Entry anchor = *fam;
  return build(es, anchor);
}

SurfaceSpec parse_surface_inline(const std::string& text) {
  const auto parts = split(text, ':');
  Entries es;
  Entry family{"family", "", 1, 1, 1};
  family.value_column = trim(parts[0].first, 0, parts[0].first.size(), family.value) + 1;
  if (family.value.empty() || family.value.find('=') != std::string::npos)
    throw ParseError("inline surface must start with a family name", 1, 1);
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto& [piece, off] = parts[i];
    const auto eq = piece.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", 1, off + 1);
    Entry e;
    e.line = 1;
    e.key_column = off + trim(piece, 0, eq, e.key) + 1;
    e.value_column = off + trim(piece, eq + 1, piece.size(), e.value) + 1;
    if (e.key == "family") throw ParseError("family given twice", 1, e.key_column);
    es.add(std::move(e));
  }
  return build(es, family);
}

SurfaceSpec load_surface(const std::string& arg) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) {
    std::ifstream in(arg);
    if (!in) throw ArgumentError("cannot read surface file " + arg);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_surface_text(ss.str());
  }
  return parse_surface_inline(arg);
}

QuadratureSpec parse_quadrature(const std::string& text) {
  QuadratureSpec q;
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  std::map<std::string, std::pair<std::string, std::size_t>> kv;
  if (colon != std::string::npos) {
    for (const auto& [piece, off] : split(text.substr(colon + 1), ',')) {
      const auto eq = piece.find('=');
      const std::size_t col = colon + 1 + off + 1;
      if (eq == std::string::npos) throw ParseError("expected key=value in quadrature spec", 1, col);
      if (!kv.emplace(piece.substr(0, eq), std::pair{piece.substr(eq + 1), col + eq + 1}).second)
        throw ParseError("duplicate quadrature key", 1, col);
    }
  }
  auto take = [&](const std::string& key) -> std::optional<std::pair<std::string, std::size_t>> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    auto v = it->second;
    kv.erase(it);
    return v;
  };
  if (kind == "gauss") {
    ProductGauss g;
    if (auto v = take("order")) g.order = int(parse_integer(v->first, 1, v->second));
    if (auto v = take("radial")) g.radial_order = int(parse_integer(v->first, 1, v->second));
    q.method = g;
  } else if (kind == "mc") {
    MonteCarlo m;
    if (auto v = take("samples")) {
      const long s = parse_integer(v->first, 1, v->second);
      if (s < 0) throw ParseError("samples must be positive", 1, v->second);
      m.samples = std::uint64_t(s);
    }
    if (auto v = take("seed")) {
      const long s = parse_integer(v->first, 1, v->second);
      if (s < 0) throw ParseError("seed must be nonnegative", 1, v->second);
      m.seed = std::uint64_t(s);
    }
    if (auto v = take("radial")) m.radial_order = int(parse_integer(v->first, 1, v->second));
    q.method = m;
  } else {
    throw ParseError("quadrature must be gauss:... or mc:...", 1, 1);
  }
  if (auto v = take("frame")) {
    if (v->first == "auto")
      q.frame = StarFrame::automatic;
    else if (v->first == "identity")
      q.frame = StarFrame::identity;
    else
      throw ParseError("frame must be auto or identity", 1, v->second);
  }
  if (!kv.empty()) throw ParseError("unknown quadrature key '" + kv.begin()->first + "'", 1, kv.begin()->second.second);
  try {
    q.validate();
  } catch (const ArgumentError& e) {
    throw ParseError(e.what(), 1, 1);
  }
  return q;
}

nlohmann::ordered_json surface_to_json(const SurfaceSpec& spec) {
  nlohmann::ordered_json j;
  j["family"] = spec.family_name();
  j["n"] = spec.n();
  j["center"] = std::vector<double>(spec.center().coords().begin(), spec.center().coords().end());
  j["reparam"] = spec.reparametrization() == Reparametrization::exponential ? "exp" : "none";
  j["name"] = spec.name();
  auto coef = [](Complex c) { return std::vector<double>{c.real(), c.imag()}; };
  std::visit(
      [&](const auto& fam) {
        using F = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<F, SphereFamily>) {
          j["R"] = fam.radius;
        } else if constexpr (std::is_same_v<F, EllipsoidFamily>) {
          j["axes"] = fam.axes;
          j["scale"] = fam.scale;
        } else if constexpr (std::is_same_v<F, PerturbedQuadricFamily>) {
          j["c"] = fam.c;
          auto& h = j["h"] = nlohmann::ordered_json::array();
          for (const auto& t : fam.h) h.push_back({{"coef", coef(t.coef)}, {"powers", t.powers}});
        } else if constexpr (std::is_same_v<F, CylinderFamily>) {
          j["coords"] = fam.coords;
          j["R"] = fam.radius;
        } else if constexpr (std::is_same_v<F, ReinhardtFamily>) {
          const ReinhardtProfile& p = *fam.profile;
          j["k"] = p.k();
          j["s0"] = p.s0();
          j["f0"] = p.f0();
          j["fp0"] = p.fp0();
          j["smin"] = p.smin();
          j["smax"] = p.smax();
          j["extend"] = p.options().extend;
          j["rtol"] = p.options().rtol;
          j["atol"] = p.options().atol;
          j["knots"] = p.knots().size();
        } else {
          auto& terms = j["terms"] = nlohmann::ordered_json::array();
          for (const auto& t : fam.terms)
            terms.push_back({{"coef", coef(t.coef)}, {"zpow", t.zpow}, {"zbarpow", t.zbarpow}});
          j["length"] = fam.length;
          j["star"] = fam.star_shaped;
        }
      },
      spec.family());
  return j;
}

const char* surface_format_help() {
  return R"(Surface spec: either a file of `key = value` lines (`#` comments) or an
inline string `family:key=value:key=value`.

  family   sphere | ellipsoid | quadric | cylinder | reinhardt | polynomial
  n        complex dimension minus one; inferred from center/axes/terms
  center   x1,y1,...,x{n+1},y{n+1}   (default origin)
  reparam  none | exp                (exp uses e^f - 1 as defining function)
  name     label echoed in reports

  sphere      R=<radius>
  ellipsoid   axes=a1,...,a{2n+2}  normalization=unit|dirichlet
  quadric     c=<c>  h="re,im,p1,...,p{n+1}; ..."   f = -c + |z|^2/(n+1) + Re sum coef z^p
  cylinder    coords=i,j,...  R=<radius>            (not star-shaped)
  reinhardt   k s0 f0 fp0 smin smax  extend=true|false   (n = 1)
  polynomial  terms="re,im|a1,..|b1,..; ..."  length=<L>  star=true|false
              f = Re sum coef z^a zbar^b

Quadrature: gauss:order=<m>[,radial=<r>][,frame=auto|identity]
          | mc:samples=<N>,seed=<S>[,radial=<r>][,frame=auto|identity]
  frame=auto maps the unit sphere through the Taylor ellipsoid of f at the
  center; frame=identity uses plain rays c + rho * omega.
)";
}

}  // namespace levilab
