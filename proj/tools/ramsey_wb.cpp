#include <openssl/evp.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "ramsey_wb.hpp"

using namespace ramsey_wb;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitLimit = 2;
constexpr int kExitInvalid = 3;

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw InternalError("sha256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// Fixed-point text that the config reader accepts back.
std::string fixed(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15f", x);
  return buf;
}

struct Run {
  std::string command;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::string out;
  std::string manifest;
  json inputs = json::object();
  json outputs = json::object();
  json outcome = json::object();
  int exit_code = kExitOk;

  std::istringstream input(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ParseError("cannot open input file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    inputs[path] = sha256_hex(ss.str());
    return std::istringstream(ss.str());
  }

  void write(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ParseError("cannot open output file '" + path + "'");
    f << content;
    if (!f) throw ParseError("failed writing '" + path + "'");
    outputs[path] = sha256_hex(content);
  }

  // `v` is the first stdout line, newline included.
  void verdict(const std::string& v) {
    auto eol = v.find('\n');
    outcome["verdict"] = v.substr(0, eol);
    std::cout << v;
  }
};

std::size_t cap_or(std::size_t fallback) {
  const char* env = std::getenv("RAMSEY_WB_CAP");
  if (!env || !*env) return fallback;
  try {
    std::size_t used = 0;
    long long v = std::stoll(env, &used);
    if (used == std::string(env).size() && v > 0) return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
  }
  throw ParseError(std::string("RAMSEY_WB_CAP must be a positive integer, got '") + env + "'");
}

std::optional<std::size_t> cap_env() {
  if (const char* env = std::getenv("RAMSEY_WB_CAP"); env && *env) return cap_or(0);
  return std::nullopt;
}

// Accepts plain integers and forms like 1e6.
std::uint64_t parse_iterations(const std::string& s) {
  double v = 0;
  try {
    std::size_t used = 0;
    v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
  } catch (const std::exception&) {
    throw ParseError("bad iteration count '" + s + "'");
  }
  if (!(v >= 1) || v > 1e13 || v != std::floor(v)) throw ParseError("iteration count must be a positive integer");
  return static_cast<std::uint64_t>(v);
}

std::optional<std::size_t> parse_palette(const std::string& s) {
  if (s == "unbounded") return std::nullopt;
  std::vector<int> v = parse_int_list(s);
  if (v.size() != 1 || v[0] < 1) throw ParseError("palette must be 'unbounded' or a positive integer");
  return static_cast<std::size_t>(v[0]);
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError("bad number '" + item + "' in '" + s + "'");
    }
  }
  return out;
}

std::string corner(const ProductSpace& space, const std::vector<int>& x) { return "(" + space.label(space.rank(x)) + ")"; }

std::string box_text(const ProductSpace& space, const BoxCopy& box) {
  std::string s = corner(space, box.a) + "-" + corner(space, box.b) + " cells";
  for (std::size_t r : box.cells(space)) s += " (" + space.label(r) + ")";
  return s;
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

std::string witness_text(const io::CopyWitness& w) {
  std::ostringstream ss;
  io::write_copy_witness(ss, w);
  return ss.str();
}

PointConfig read_config_file(Run& run, const std::string& path) {
  auto in = run.input(path);
  try {
    return io::read_config(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

template <class F>
auto with_file(const std::string& path, F&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

struct Targets {
  std::string target, mono, rainbow;

  void add(CLI::App* sub) {
    sub->add_option("--target", target, "box shape sought both mono and rainbow, e.g. 2x2");
    sub->add_option("--mono", mono, "box shape whose monochromatic copies are sought");
    sub->add_option("--rainbow", rainbow, "box shape whose rainbow copies are sought");
  }

  arrow::ArrowQuery query(ProductSpace space, std::optional<std::size_t> palette) const {
    arrow::ArrowQuery q{std::move(space), std::nullopt, std::nullopt, palette};
    if (!target.empty()) q.mono = q.rainbow = arrow::parse_shape(target);
    if (!mono.empty()) q.mono = arrow::parse_shape(mono);
    if (!rainbow.empty()) q.rainbow = arrow::parse_shape(rainbow);
    if (!q.mono && !q.rainbow) throw ParseError("give --target, --mono or --rainbow");
    return q;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ramsey workbench: exact searches and witness checks for Euclidean Ramsey questions"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  Run run;
  std::function<void()> action;
  CLI::App* leaf = nullptr;

  auto command = [&](CLI::App* parent, const std::string& name, const std::string& help, bool seeded, bool out) {
    CLI::App* sub = parent->add_subcommand(name, help);
    if (seeded) sub->add_option("--seed", run.seed, "RNG seed (default 0)")->capture_default_str();
    sub->add_option("--jobs", run.jobs, "worker threads; results do not depend on it")->capture_default_str();
    sub->add_option("--manifest", run.manifest, "write a JSON run manifest here");
    if (out) sub->add_option("--out", run.out, "write the witness or result file here");
    return sub;
  };
  auto on = [&](CLI::App* sub, std::function<void()> fn) {
    sub->callback([&, sub, fn] {
      leaf = sub;
      action = fn;
    });
  };
  auto group = [&](const std::string& name, const std::string& help) {
    CLI::App* g = app.add_subcommand(name, help);
    g->require_subcommand(1);
    return g;
  };

  // ---------------------------------------------------------------- geom
  CLI::App* geom = group("geom", "isometric copies of point configurations");
  std::string a_file, s_file, coloring_file;

  CLI::App* geom_copy = command(geom, "copy", "decide whether S contains an isometric copy of A", false, false);
  geom_copy->add_option("--a", a_file, "configuration A")->required();
  geom_copy->add_option("--s", s_file, "configuration S")->required();
  on(geom_copy, [&] {
    PointConfig a = read_config_file(run, a_file), s = read_config_file(run, s_file);
    if (a.norm() != s.norm()) throw ParseError("A and S use different norms");
    auto w = is_isometric_copy(a, s, a.norm());
    if (!w) {
      run.verdict("NO_COPY\n");
      return;
    }
    run.verdict("COPY\n");
    for (std::size_t i = 0; i < a.size(); ++i) std::cout << a.label(i) << " -> " << s.label(w->image[i]) << '\n';
  });

  CLI::App* geom_enum = command(geom, "enumerate", "list the copies of A inside S, one per image set", false, false);
  geom_enum->add_option("--a", a_file, "configuration A")->required();
  geom_enum->add_option("--s", s_file, "configuration S")->required();
  on(geom_enum, [&] {
    PointConfig a = read_config_file(run, a_file), s = read_config_file(run, s_file);
    if (a.norm() != s.norm()) throw ParseError("A and S use different norms");
    auto all = enumerate_copies(a, s, a.norm());
    run.outcome["copies"] = all.size();
    run.verdict("COPIES " + std::to_string(all.size()) + "\n");
    for (const auto& w : all) {
      std::vector<std::string> labels;
      for (std::size_t t : w.image) labels.push_back(s.label(t));
      std::cout << join(labels, " ") << '\n';
    }
  });

  // --------------------------------------------------------------- color
  CLI::App* color = group("color", "colorings of finite sets and of the plane");

  CLI::App* color_find = command(color, "find", "first monochromatic or rainbow copy of A in a colored S", false, true);
  color_find->add_option("--a", a_file, "configuration A")->required();
  color_find->add_option("--s", s_file, "configuration S")->required();
  color_find->add_option("--coloring", coloring_file, "coloring of S ('coloring points' file)")->required();
  on(color_find, [&] {
    PointConfig a = read_config_file(run, a_file), s = read_config_file(run, s_file);
    if (a.norm() != s.norm()) throw ParseError("A and S use different norms");
    auto cin = run.input(coloring_file);
    Coloring c = with_file(coloring_file, [&] { return io::read_config_coloring(cin, s); });
    auto got = find_mono_or_rainbow(s, c, a, a.norm());
    if (!got) {
      run.verdict("AVOIDING\n");
      return;
    }
    run.verdict(std::string(copy_class_name(got->verdict)) + "\n");
    for (std::size_t i = 0; i < a.size(); ++i)
      std::cout << a.label(i) << " -> " << s.label(got->witness.image[i]) << " color " << c[got->witness.image[i]]
                << '\n';
    if (!run.out.empty()) run.write(run.out, witness_text(verify::config_copy_witness(a, s, got->witness, c, a.norm())));
  });

  std::string oracle_spec;
  std::size_t trials = 10000;
  CLI::App* color_sample = command(color, "sample", "random placements of a planar A under a coloring oracle", true, false);
  color_sample->add_option("--a", a_file, "configuration A (dimension <= 2)")->required();
  color_sample->add_option("--oracle", oracle_spec, "oracle, e.g. strip:h=sqrt3/2")->required();
  color_sample->add_option("--trials", trials, "number of placements")->capture_default_str();
  on(color_sample, [&] {
    PointConfig a = read_config_file(run, a_file);
    auto oracle = ColoringOracle::parse(oracle_spec);
    auto v = sample_verify_planar(oracle, a, trials, run.seed);
    if (!v) {
      run.verdict("NO_VIOLATION\n");
      std::cout << "trials " << trials << '\n';
      return;
    }
    run.outcome["trial"] = v->trial;
    run.verdict("MONOCHROMATIC\n");
    std::cout << "trial " << v->trial << " color " << v->color << '\n';
    for (std::size_t i = 0; i < v->points.size(); ++i)
      std::cout << a.label(i) << ' ' << fmt(v->points[i][0]) << ' ' << fmt(v->points[i][1]) << '\n';
  });

  // ------------------------------------------------------------------ hj
  CLI::App* hjg = group("hj", "canonical Hales-Jewett searches on [k]^n");
  int k = 2, m = 2, n = 2;

  CLI::App* hj_search = command(hjg, "search", "exhaustive search for a coloring with no canonical m-subspace", false, true);
  hj_search->add_option("--k", k, "alphabet size")->required();
  hj_search->add_option("--m", m, "subspace dimension")->required();
  hj_search->add_option("--n", n, "grid dimension")->required();
  on(hj_search, [&] {
    auto v = hj::canonical_hj_search(k, m, n, cap_or(hj::kDefaultHjCellCap), run.jobs);
    run.outcome["nodes"] = v.nodes;
    if (v.arrow_holds) {
      run.verdict("ARROW_HOLDS\n");
    } else {
      run.verdict("AVOIDING_WITNESS\n");
      std::ostringstream grid;
      io::write_grid(grid, k, n, *v.avoiding);
      std::cout << grid.str();
      if (!run.out.empty()) run.write(run.out, grid.str());
    }
    std::cout << "nodes " << v.nodes << '\n';
  });

  std::string grid_file;
  CLI::App* hj_detect = command(hjg, "detect", "find a canonically colored m-subspace in a grid coloring", false, false);
  hj_detect->add_option("--file", grid_file, "grid coloring file")->required();
  hj_detect->add_option("--m", m, "subspace dimension")->required();
  on(hj_detect, [&] {
    auto in = run.input(grid_file);
    auto g = with_file(grid_file, [&] { return io::read_grid(in); });
    auto sub = hj::find_canonical_subspace(g.coloring, g.k, g.n, m);
    if (!sub) {
      run.verdict("AVOIDING\n");
      return;
    }
    std::string cls = sub->relation.is_full() ? "MONOCHROMATIC" : sub->relation.is_discrete() ? "RAINBOW" : "CANONICAL";
    run.outcome["template"] = sub->tmpl.to_string();
    run.outcome["relation"] = sub->relation.to_string();
    run.verdict(cls + "\n");
    std::cout << "template " << sub->tmpl.to_string() << "\nrelation " << sub->relation.to_string() << '\n';
  });

  // ------------------------------------------------------------ triangle
  CLI::App* trig = group("triangle", "simplex extensions of an acute triangle in R^3");
  std::string sides = "1,1,1", pair_file, report_file;
  double angle = 0;
  std::size_t steps = 1000;

  CLI::App* tri_extend = command(trig, "extend", "extend a pair (A, B) at distance c to a simplex ABCD", false, true);
  tri_extend->add_option("--sides", sides, "triangle sides a,b,c")->capture_default_str();
  tri_extend->add_option("--pair", pair_file, "config file with the two points A and B (dimension 3)")->required();
  tri_extend->add_option("--angle", angle, "angle parameter of C on its circle")->required();
  on(tri_extend, [&] {
    auto s = parse_double_list(sides);
    if (s.size() != 3) throw ParseError("--sides needs three values");
    tri::Triangle t(s[0], s[1], s[2]);
    PointConfig pair = read_config_file(run, pair_file);
    if (pair.size() != 2 || pair.dim() != 3) throw ParseError(pair_file + ": expected two points in dimension 3");
    auto to_vec = [](const Point& p) { return tri::Vec3{to_double(p[0]), to_double(p[1]), to_double(p[2])}; };
    tri::Vec3 a = to_vec(pair[0]), b = to_vec(pair[1]);
    auto e = tri::extend_pair(t, a, b, angle);
    double worst = 0;
    for (auto [got, want] : tri::simplex_residuals(t, a, b, e)) worst = std::max(worst, std::abs(got - want));
    run.outcome["max_residual"] = worst;
    run.verdict("EXTENSION\n");
    std::cout << "C " << fmt(e.c[0]) << ' ' << fmt(e.c[1]) << ' ' << fmt(e.c[2]) << '\n';
    std::cout << "D " << fmt(e.d[0]) << ' ' << fmt(e.d[1]) << ' ' << fmt(e.d[2]) << '\n';
    std::cout << "max_residual " << fmt(worst) << '\n';
    if (!run.out.empty()) {
      std::ostringstream ss;
      ss << "config 3 l2\n";
      std::vector<std::pair<std::string, tri::Vec3>> pts{{pair.label(0), a}, {pair.label(1), b}, {"C", e.c}, {"D", e.d}};
      for (const auto& [label, p] : pts) ss << label << ' ' << fixed(p[0]) << ' ' << fixed(p[1]) << ' ' << fixed(p[2]) << '\n';
      run.write(run.out, ss.str());
    }
  });

  CLI::App* tri_orbit = command(trig, "orbit", "grow the extension orbit of a good pair and measure coverage", true, false);
  tri_orbit->add_option("--sides", sides, "triangle sides a,b,c")->capture_default_str();
  tri_orbit->add_option("--steps", steps, "extension steps")->capture_default_str();
  tri_orbit->add_option("--report", report_file, "coverage CSV (cell_index,occupied)");
  on(tri_orbit, [&] {
    auto s = parse_double_list(sides);
    if (s.size() != 3) throw ParseError("--sides needs three values");
    tri::Triangle t(s[0], s[1], s[2]);
    tri::GoodPair seed{{0, 0, 0}, {t.c, 0, 0}, 0, 1};
    auto rep = tri::orbit_explore(t, seed, steps, run.seed);
    std::size_t hit = 0;
    for (bool b : rep.occupied) hit += b;
    run.outcome["coverage"] = rep.coverage;
    run.verdict("COVERAGE " + fmt(rep.coverage) + "\n");
    std::cout << "pairs " << rep.cloud.pairs.size() << "\ncells " << rep.occupied.size() << "\noccupied " << hit << '\n';
    if (!report_file.empty()) {
      std::ostringstream csv;
      csv << "cell_index,occupied\n";
      for (std::size_t i = 0; i < rep.occupied.size(); ++i) csv << i << ',' << (rep.occupied[i] ? 1 : 0) << '\n';
      run.write(report_file, csv.str());
    }
  });

  // ---------------------------------------------------------------- cube
  CLI::App* cubeg = group("cube", "hypercube copies in simplex products");
  int d = 0, r = 2;
  std::string sizes_text;
  bool rate = false;

  CLI::App* cube_rainbow = command(cubeg, "rainbow", "random search for a rainbow box in [d]^m", true, true);
  cube_rainbow->add_option("--d", d, "side of the product (checked against the file)");
  cube_rainbow->add_option("--m", m, "number of factors (checked against the file)");
  cube_rainbow->add_option("--coloring", coloring_file, "product coloring file")->required();
  cube_rainbow->add_option("--trials", trials, "random boxes to try")->capture_default_str();
  cube_rainbow->add_flag("--rate", rate, "also report the success rate over all trials");
  on(cube_rainbow, [&] {
    auto in = run.input(coloring_file);
    auto [space, c] = with_file(coloring_file, [&] { return io::read_product_coloring(in); });
    for (int f : space.sizes())
      if ((d && f != d) || (cube_rainbow->count("--m") && static_cast<int>(space.factors()) != m))
        throw DomainError("coloring space " + space.id() + " is not [d]^m");
    auto res = cube::random_rainbow_search(space, c, trials, run.seed, run.jobs);
    if (res.outcome == cube::RainbowOutcome::None) {
      run.verdict("NONE\n");
      std::cout << "trials " << res.trials << '\n';
    } else {
      bool mono = res.outcome == cube::RainbowOutcome::MonoPair;
      run.verdict(mono ? "MONOCHROMATIC\n" : "RAINBOW\n");
      if (!mono) std::cout << "trial " << res.trials << '\n';
      std::cout << "box " << box_text(space, res.box) << '\n';
      if (!run.out.empty()) run.write(run.out, witness_text(verify::box_witness(space, res.box, c)));
    }
    if (rate) {
      auto hits = cube::count_rainbow_trials(space, c, trials, run.seed);
      run.outcome["rainbow_trials"] = hits;
      std::cout << "rate " << hits << '/' << trials << " = " << fmt(static_cast<double>(hits) / static_cast<double>(trials))
                << "\nlower_bound " << fmt(cube::rainbow_probability_lower_bound(space.sizes()[0], static_cast<int>(space.factors())))
                << '\n';
    }
  });

  CLI::App* cube_mono = command(cubeg, "mono", "layered pigeonhole search for a monochromatic full box", false, true);
  cube_mono->add_option("--sizes", sizes_text, "factor sizes (checked against the file)");
  cube_mono->add_option("--r", r, "number of colors")->required();
  cube_mono->add_option("--coloring", coloring_file, "product coloring file")->required();
  on(cube_mono, [&] {
    auto in = run.input(coloring_file);
    auto [space, c] = with_file(coloring_file, [&] { return io::read_product_coloring(in); });
    if (!sizes_text.empty() && parse_int_list(sizes_text) != space.sizes())
      throw DomainError("coloring space " + space.id() + " differs from --sizes " + sizes_text);
    auto box = cube::layered_mono_search(space, c, r);
    run.verdict("MONOCHROMATIC\n");
    std::cout << "box " << box_text(space, box) << '\n';
    if (!run.out.empty()) run.write(run.out, witness_text(verify::box_witness(space, box, c)));
  });

  CLI::App* cube_bounds = command(cubeg, "bounds", "dimension bounds of the recursive construction", false, false);
  cube_bounds->add_option("--k", k, "copy dimension")->required();
  cube_bounds->add_option("--m", m, "hypercube dimension")->required();
  cube_bounds->add_option("--r", r, "number of colors")->capture_default_str();
  on(cube_bounds, [&] {
    auto t = cube::compute_bounds(k, m, r);
    run.outcome["n1"] = t.n1.to_string();
    run.verdict("BOUNDS\n");
    std::cout << "n2 " << t.n2.to_string() << "\nn3 " << t.n3.to_string() << "\nn1 " << t.n1.to_string() << '\n';
    if (t.n_prime) std::cout << "n' " << t.n_prime->to_string() << '\n';
    if (t.r_prime) std::cout << "r' " << t.r_prime->to_string() << '\n';
    if (t.m_prime) std::cout << "m' " << t.m_prime->to_string() << '\n';
  });

  // ------------------------------------------------------------- maxnorm
  CLI::App* maxg = group("maxnorm", "monochromatic or rainbow copies of A^d in the max norm");
  std::string set_text;

  CLI::App* max_densify = command(maxg, "densify", "densify a base set A on the line", false, false);
  max_densify->add_option("--set", set_text, "comma-separated rationals")->required();
  on(max_densify, [&] {
    auto s = maxnorm::densify(maxnorm::parse_base_set(set_text));
    std::vector<std::string> b, idx;
    for (const auto& v : s.b) b.push_back(to_string(v));
    for (int i : s.index) idx.push_back(std::to_string(i));
    run.outcome["B"] = b;
    run.outcome["I"] = idx;
    run.verdict("B={" + join(b, ",") + "}\n");
    std::cout << "I={" << join(idx, ",") << "}\nk " << s.k() << '\n';
  });

  CLI::App* max_pipe = command(maxg, "pipeline", "witness for a coloring of B^n via a canonical subspace", false, true);
  max_pipe->add_option("--set", set_text, "comma-separated rationals")->required();
  max_pipe->add_option("--d", d, "power of A")->required();
  max_pipe->add_option("--n", n, "grid dimension (checked against the file)");
  max_pipe->add_option("--coloring", coloring_file, "grid coloring of [k]^n, k = |B|")->required();
  on(max_pipe, [&] {
    auto a = maxnorm::parse_base_set(set_text);
    auto set = maxnorm::densify(a);
    auto in = run.input(coloring_file);
    auto g = with_file(coloring_file, [&] { return io::read_grid(in); });
    if (g.k != set.k()) throw DomainError("grid alphabet " + std::to_string(g.k) + " differs from |B| = " + std::to_string(set.k()));
    if (max_pipe->count("--n") && g.n != n) throw DomainError("grid dimension differs from --n");
    auto res = maxnorm::maxnorm_mr_pipeline(a, d, g.n, g.coloring);
    run.outcome["template"] = res.tmpl.to_string();
    run.verdict(std::string(copy_class_name(res.verdict)) + "\n");
    std::cout << "m " << res.m << "\ntemplate " << res.tmpl.to_string() << "\nrelation " << res.relation.to_string() << '\n';
    for (std::size_t i = 0; i < res.witness.cells.size(); ++i)
      std::cout << res.witness.source.label(i) << " -> " << hj::cell_to_string(res.witness.cells[i]) << '\n';
    if (!run.out.empty()) run.write(run.out, witness_text(verify::maxnorm_witness(res.witness, g.coloring, g.k)));
  });

  // --------------------------------------------------------------- arrow
  CLI::App* arrowg = group("arrow", "arrow relations on clique products");
  std::string space_text, palette_text = "unbounded", iters_text = "100000";
  Targets targets;
  std::uint64_t restart = 20000;

  CLI::App* arrow_decide = command(arrowg, "decide", "exhaustive decision of an arrow relation", false, true);
  arrow_decide->add_option("--space", space_text, "factor sizes, e.g. 3,3")->required();
  targets.add(arrow_decide);
  arrow_decide->add_option("--palette", palette_text, "'unbounded' or a number of colors")->capture_default_str();
  on(arrow_decide, [&] {
    auto q = targets.query(ProductSpace(parse_int_list(space_text)), parse_palette(palette_text));
    auto v = arrow::decide_arrow(q, cap_env(), run.jobs);
    run.outcome["nodes"] = v.nodes;
    run.verdict(std::string(arrow::verdict_name(v.verdict)) + "\n");
    std::cout << "nodes " << v.nodes << '\n';
    if (v.witness) {
      std::ostringstream ss;
      io::write_product_coloring(ss, q.space, *v.witness);
      std::cout << ss.str();
      if (!run.out.empty()) run.write(run.out, ss.str());
    }
  });

  CLI::App* arrow_probe = command(arrowg, "probe", "min-conflicts search for an avoiding coloring", true, true);
  arrow_probe->add_option("--space", space_text, "factor sizes, e.g. 8,6,4,2")->required();
  targets.add(arrow_probe);
  arrow_probe->add_option("--palette", palette_text, "'unbounded' or a number of colors")->capture_default_str();
  arrow_probe->add_option("--iters", iters_text, "total iterations, e.g. 1e6")->capture_default_str();
  arrow_probe->add_option("--restart", restart, "iterations per restart")->capture_default_str();
  on(arrow_probe, [&] {
    if (targets.target.empty() && targets.mono.empty() && targets.rainbow.empty()) targets.target = "2x2";
    auto q = targets.query(ProductSpace(parse_int_list(space_text)), parse_palette(palette_text));
    arrow::ProbeOptions opt;
    opt.iterations = parse_iterations(iters_text);
    opt.restart_length = restart;
    opt.jobs = run.jobs;
    auto v = arrow::heuristic_probe(q, run.seed, opt);
    run.outcome["best_violations"] = v.best_violations;
    run.outcome["restarts"] = v.trace.size();
    run.verdict(std::string(arrow::verdict_name(v.verdict)) + "\n");
    std::vector<std::string> trace;
    for (auto t : v.trace) trace.push_back(std::to_string(t));
    std::cout << "best_violations " << v.best_violations << "\nmoves " << v.moves << "\ntrace " << join(trace, ",")
              << '\n';
    if (v.witness) {
      std::ostringstream ss;
      io::write_product_coloring(ss, q.space, *v.witness);
      if (!run.out.empty()) run.write(run.out, ss.str());
    }
  });

  CLI::App* arrow_bridge = command(arrowg, "bridge", "embed a clique product as a Euclidean point set", false, true);
  arrow_bridge->add_option("--space", space_text, "factor sizes, e.g. 876,123,4,2")->required();
  on(arrow_bridge, [&] {
    auto bridge = arrow::geometric_bridge(ProductSpace(parse_int_list(space_text)));
    run.outcome["dimension"] = bridge.dimension();
    run.verdict("DIMENSION " + std::to_string(bridge.dimension()) + "\n");
    std::cout << "coordinates " << bridge.coordinates() << "\ncells " << bridge.space().cells() << '\n';
    if (!run.out.empty()) {
      std::ostringstream ss;
      io::write_config(ss, bridge.config(cap_or(arrow::kDefaultBridgeCap)));
      run.write(run.out, ss.str());
    }
  });

  // -------------------------------------------------------------- verify
  CLI::App* verg = group("verify", "independent re-verification of witness files");
  std::string witness_file;
  auto report = [&](const verify::Report& rep) {
    run.outcome["valid"] = rep.ok;
    run.verdict(std::string(rep.ok ? "VALID" : "INVALID") + "\n");
    std::cout << rep.message << '\n';
    if (!rep.ok) run.exit_code = kExitInvalid;
  };

  CLI::App* ver_copy = command(verg, "copy", "check a copy witness file", false, false);
  ver_copy->add_option("--witness", witness_file, "copy witness file")->required();
  on(ver_copy, [&] {
    auto in = run.input(witness_file);
    report(verify::copy_witness(with_file(witness_file, [&] { return io::read_copy_witness(in); })));
  });

  CLI::App* ver_arrow = command(verg, "arrow", "check that a coloring avoids the arrow targets", false, false);
  ver_arrow->add_option("--space", space_text, "factor sizes (checked against the file)");
  targets.add(ver_arrow);
  ver_arrow->add_option("--palette", palette_text, "'unbounded' or a number of colors")->capture_default_str();
  ver_arrow->add_option("--coloring", coloring_file, "product coloring file")->required();
  on(ver_arrow, [&] {
    auto in = run.input(coloring_file);
    auto [space, c] = with_file(coloring_file, [&] { return io::read_product_coloring(in); });
    if (!space_text.empty() && parse_int_list(space_text) != space.sizes())
      throw DomainError("coloring space " + space.id() + " differs from --space " + space_text);
    report(verify::avoiding_arrow(targets.query(space, parse_palette(palette_text)), c));
  });

  CLI::App* ver_hj = command(verg, "hj", "check that a grid coloring has no canonical m-subspace", false, false);
  ver_hj->add_option("--file", grid_file, "grid coloring file")->required();
  ver_hj->add_option("--m", m, "subspace dimension")->required();
  on(ver_hj, [&] {
    auto in = run.input(grid_file);
    report(verify::avoiding_hj(with_file(grid_file, [&] { return io::read_grid(in); }), m));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  json params = json::object();
  for (CLI::App* p = leaf; p && p != &app; p = p->get_parent()) run.command = p->get_name() + (run.command.empty() ? "" : " " + run.command);
  for (const CLI::Option* opt : leaf->get_options()) {
    const std::string& name = opt->get_name();
    if (name == "--help" || name == "--manifest" || name == "--jobs") continue;
    if (opt->count()) {
      auto res = opt->results();
      params[name.substr(2)] = res.empty() ? "" : res.back();
    } else if (!opt->get_default_str().empty()) {
      params[name.substr(2)] = opt->get_default_str();
    }
  }

  std::string error;
  try {
    action();
  } catch (const SearchExhausted& e) {
    error = std::string("search exhausted: ") + e.what();
    run.exit_code = kExitLimit;
  } catch (const ResourceError& e) {
    error = std::string("resource limit: ") + e.what();
    run.exit_code = kExitLimit;
  } catch (const BoundError& e) {
    error = std::string("bound: ") + e.what();
    run.exit_code = kExitLimit;
  } catch (const InternalError& e) {
    error = std::string("internal error: ") + e.what();
    run.exit_code = kExitUsage;
  } catch (const Error& e) {
    error = e.what();
    run.exit_code = kExitUsage;
  }
  if (!error.empty()) {
    std::cerr << "error: " << error << '\n';
    run.outcome["error"] = error;
  }
  std::cout.flush();

  if (!run.manifest.empty()) {
    json man = json::object();
    man["subcommand"] = run.command;
    man["parameters"] = params;
    man["rng_seed"] = run.seed;
    man["inputs"] = run.inputs;
    man["outputs"] = run.outputs;
    man["outcome"] = run.outcome;
    man["exit_code"] = run.exit_code;
    std::ofstream f(run.manifest, std::ios::binary);
    f << man.dump(2) << '\n';
    if (!f) {
      std::cerr << "error: cannot write manifest '" << run.manifest << "'\n";
      return kExitUsage;
    }
  }
  return run.exit_code;
}
