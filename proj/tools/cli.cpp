#include "cli.hpp"

#include "kgraph/errors.hpp"
#include "kgraph/kms.hpp"
#include "kgraph/oracle.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <list>
#include <map>
#include <ostream>
#include <sstream>

namespace kgraph::cli {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Argument parsing

struct Flags {
  CLI::App* app;
  Command& cmd;
  std::list<std::string>& storage;
  std::vector<std::function<void()>>& finish;

  void text(const std::string& name, std::optional<std::string>& target, const std::string& desc,
            bool required = false) {
    std::string& slot = storage.emplace_back();
    CLI::Option* opt = app->add_option(name, slot, desc);
    if (required) opt->required();
    finish.push_back([opt, &slot, &target] {
      if (opt->count() > 0) target = slot;
    });
  }
  void integer(const std::string& name, std::optional<int>& target, const std::string& desc) {
    std::string& slot = storage.emplace_back();
    CLI::Option* opt = app->add_option(name, slot, desc);
    finish.push_back([opt, &slot, &target, name] {
      if (opt->count() == 0) return;
      try {
        std::size_t used = 0;
        target = std::stoi(slot, &used);
        if (used != slot.size()) throw std::invalid_argument(slot);
      } catch (const std::exception&) {
        throw UsageError(name + " expects an integer, got '" + slot + "'");
      }
    });
  }
  void graph() { app->add_option("graph", cmd.graph_path, "graph JSON file")->required(); }
  void json_flag() { app->add_flag("--json", cmd.json, "emit JSON instead of a text table"); }
  void threads() { app->add_option("--threads", cmd.threads, "worker threads (default 1)"); }
  void dynamics(bool with_beta) {
    if (with_beta) text("--beta", cmd.beta, "inverse temperature (decimal or p/q)", true);
    text("--log-r", cmd.log_r, "r_i = ln(a_i) for comma-separated positive a_i (decimal or p/q)");
    text("--r", cmd.r, "comma-separated real r_i");
  }
};

bool needs_dynamics(const std::string& verb) {
  return verb == "subharmonic" || verb == "simplex" || verb == "beta-table" ||
         verb == "decompose" || verb == "eval" || verb == "check";
}

}  // namespace

Command parse_args(const std::vector<std::string>& args) {
  Command cmd;
  CLI::App app{"KMS states of Toeplitz algebras of finite k-graphs", "kgraph-kms"};
  app.require_subcommand(1, 1);
  std::list<std::string> storage;
  std::vector<std::function<void()>> finish;
  auto verb = [&](const std::string& name, const std::string& desc) {
    return Flags{app.add_subcommand(name, desc), cmd, storage, finish};
  };

  {
    Flags f = verb("validate", "parse and validate a graph file");
    f.graph();
    f.json_flag();
  }
  {
    Flags f = verb("components", "equivalence classes for a colour set");
    f.graph();
    f.text("--colors", cmd.colors, "comma-separated colours, 'all' (default) or 'none'");
    f.json_flag();
  }
  {
    Flags f = verb("spectra", "spectral radii of the vertex matrices");
    f.graph();
    f.app->add_flag("--per-component", cmd.per_component,
                    "radii restricted to each class for all colours");
    f.json_flag();
  }
  {
    Flags f = verb("subharmonic", "certified subharmonic components at (beta, r)");
    f.graph();
    f.dynamics(true);
    f.threads();
    f.json_flag();
  }
  {
    Flags f = verb("simplex", "extreme KMS states at (beta, r)");
    f.graph();
    f.dynamics(true);
    f.integer("--per-bound", cmd.per_bound, "period search bound (default |C|)");
    f.threads();
    f.json_flag();
  }
  {
    Flags f = verb("beta-table", "the set of beta at which each class certifies");
    f.graph();
    f.dynamics(false);
    f.json_flag();
  }
  {
    Flags f = verb("decompose", "write a KMS vector as a mixture of extreme ones");
    f.graph();
    f.dynamics(true);
    f.text("--vector", cmd.vector_path, "JSON array in vertex order", true);
    f.json_flag();
  }
  {
    Flags f = verb("per", "periodicity group of a class");
    f.graph();
    f.text("--component", cmd.component, "comma-separated vertex ids", true);
    f.text("--colors", cmd.colors, "comma-separated colours, 'all' or 'none'", true);
    f.integer("--bound", cmd.bound, "search bound per coordinate (default |C|)");
    f.json_flag();
  }
  {
    Flags f = verb("eval", "evaluate an extreme state on S_lambda S_mu^*");
    f.graph();
    f.dynamics(true);
    f.text("--component", cmd.component, "comma-separated vertex ids", true);
    f.text("--lambda", cmd.lambda, "edge ids, range end first, or a vertex id", true);
    f.text("--mu", cmd.mu, "edge ids, range end first, or a vertex id", true);
    f.text("--theta", cmd.theta, "character angles, one per period generator");
    f.integer("--bound", cmd.bound, "period search bound (default |C|)");
    f.json_flag();
  }
  {
    Flags f = verb("check", "run the consistency checks");
    f.graph();
    f.dynamics(true);
    f.app->add_option("--seed", cmd.seed, "random seed (default 0)");
    f.threads();
    f.json_flag();
  }

  std::vector<const char*> argv{"kgraph-kms"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    cmd.verb = "help";
    cmd.help_text = app.help();
    for (CLI::App* sub : app.get_subcommands())
      if (sub->parsed()) cmd.help_text = sub->help();
    return cmd;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  for (auto& step : finish) step();
  cmd.verb = app.get_subcommands().front()->get_name();
  if (needs_dynamics(cmd.verb) && cmd.log_r.has_value() == cmd.r.has_value())
    throw UsageError("exactly one of --log-r and --r is required");
  if (cmd.threads < 1) throw UsageError("--threads must be at least 1");
  return cmd;
}

namespace {

// ---------------------------------------------------------------------------
// Input helpers

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    out.push_back(item);
  }
  return out;
}

Query make_query(const Command& cmd) {
  const double beta = cmd.beta ? parse_real(*cmd.beta) : 1.0;
  if (cmd.log_r) {
    std::vector<Rational> bases;
    for (const auto& item : split(*cmd.log_r)) bases.push_back(Rational::parse(item));
    return Query::from_log_bases(beta, std::move(bases));
  }
  std::vector<double> r;
  for (const auto& item : split(*cmd.r)) r.push_back(parse_real(item));
  return Query::from_r(beta, std::move(r));
}

ColorSet parse_colors(const KGraph& g, const std::optional<std::string>& text) {
  if (!text || *text == "all") return ColorSet::all(g.rank());
  if (text->empty() || *text == "none") return {};
  ColorSet out;
  for (const auto& item : split(*text)) {
    int c = 0;
    try {
      std::size_t used = 0;
      c = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("malformed colour '" + item + "'");
    }
    if (c < 1 || c > g.rank())
      throw RangeError("colour " + std::to_string(c) + " outside 1.." + std::to_string(g.rank()));
    out = out.with(c - 1);
  }
  return out;
}

VertexSet parse_component(const KGraph& g, const std::string& text) {
  const auto ids = split(text);
  return vertex_set(g, ids);
}

Path parse_path(const KGraph& g, const std::string& text) {
  const auto ids = split(text);
  if (ids.size() == 1 && !g.find_edge(ids[0]) && g.find_vertex(ids[0]))
    return vertex_path(g, *g.find_vertex(ids[0]));
  return make_path(g, ids);
}

VertexVector read_vector(const KGraph& g, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot read vector file '" + path + "'");
  std::vector<double> values;
  try {
    values = json::parse(in).get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw SchemaError("vector file must hold a JSON array of numbers: " + std::string(e.what()));
  }
  if (static_cast<int>(values.size()) != g.vertex_count())
    throw DimensionError("vector has " + std::to_string(values.size()) +
                         " entries but the graph has " + std::to_string(g.vertex_count()) +
                         " vertices");
  return Eigen::Map<VertexVector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

// ---------------------------------------------------------------------------
// Rendering helpers

std::string num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream out;
  out.precision(10);
  out << x;
  return out.str();
}

json num_json(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

json ids_json(const KGraph& g, const VertexSet& set) { return vertex_ids(g, set); }

json colors_json(ColorSet I) {
  json out = json::array();
  for (int c : I.colors()) out.push_back(c + 1);
  return out;
}

json vector_json(const VertexVector& x) {
  json out = json::array();
  for (Eigen::Index v = 0; v < x.size(); ++v) out.push_back(x(v));
  return out;
}

std::string set_text(const KGraph& g, const VertexSet& set) {
  std::string out = "{";
  for (std::size_t i = 0; i < set.size(); ++i) out += (i ? "," : "") + g.vertex_id(set[i]);
  return out + "}";
}

std::string colors_text(ColorSet I) {
  std::string out = "{";
  for (int c : I.colors()) out += (out.size() > 1 ? "," : "") + std::to_string(c + 1);
  return out + "}";
}

std::string vector_text(const VertexVector& x) {
  std::string out = "(";
  for (Eigen::Index v = 0; v < x.size(); ++v) out += (v ? ", " : "") + num(x(v));
  return out + ")";
}

std::string r_text(const Query& q) {
  std::string out = "(";
  for (int i = 0; i < q.rank(); ++i) {
    if (i) out += ", ";
    out += q.log_bases ? "ln(" + (*q.log_bases)[i].str() + ")" : num(q.r[i]);
  }
  return out + ")";
}

void print_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (width.size() <= c) width.push_back(0);
      width[c] = std::max(width[c], row[c].size());
    }
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line += row[c];
      if (c + 1 < row.size()) line += std::string(width[c] - row[c].size() + 2, ' ');
    }
    out << line << "\n";
  }
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

json query_json(const Query& q) {
  json j;
  j["beta"] = q.beta;
  j["r"] = q.r;
  if (q.log_bases) {
    json bases = json::array();
    for (const auto& a : *q.log_bases) bases.push_back(a.str());
    j["log_r"] = bases;
  }
  return j;
}

std::string per_text(const ExtremeState& st) {
  if (!st.per) return "unknown";
  if (st.per->rank() == 0) return "{0}";
  std::string out;
  for (const auto& gen : st.per->generators) {
    if (!out.empty()) out += " + ";
    out += "Z(";
    for (std::size_t i = 0; i < gen.size(); ++i) out += (i ? "," : "") + std::to_string(gen[i]);
    out += ")";
  }
  return out;
}

std::string beta_set_text(const BetaSet& s) {
  auto end = [](double v, const std::optional<std::string>& expr) {
    return expr ? *expr : num(v);
  };
  switch (s.kind) {
    case BetaSet::Kind::empty:
      return "empty";
    case BetaSet::Kind::point:
      return "{" + end(s.lo, s.lo_expr) + "}";
    case BetaSet::Kind::interval:
      return "(" + end(s.lo, s.lo_expr) + ", " + end(s.hi, s.hi_expr) + ")";
    case BetaSet::Kind::all:
      return "all";
  }
  return "empty";
}

json beta_set_json(const BetaSet& s) {
  json j;
  j["kind"] = kind_name(s.kind);
  if (s.kind == BetaSet::Kind::point) {
    j["value"] = s.lo;
    if (s.lo_expr) j["expr"] = *s.lo_expr;
  } else if (s.kind == BetaSet::Kind::interval) {
    j["lo"] = num_json(s.lo);
    j["hi"] = num_json(s.hi);
    if (s.lo_expr) j["lo_expr"] = *s.lo_expr;
    if (s.hi_expr) j["hi_expr"] = *s.hi_expr;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Verbs

int do_validate(const Command& cmd, const KGraph& g, std::ostream& out) {
  if (cmd.json) {
    emit(out, {{"k", g.rank()},
               {"vertices", g.vertices()},
               {"edges", g.edges().size()},
               {"matrices_only", g.matrices_only()}});
    return 0;
  }
  out << "valid " << g.rank() << "-graph: " << g.vertex_count() << " vertices, "
      << g.edges().size() << " edges" << (g.matrices_only() ? ", matrices only" : "") << "\n";
  return 0;
}

int do_components(const Command& cmd, const KGraph& g, std::ostream& out) {
  const ColorSet I = parse_colors(g, cmd.colors);
  const ComponentPartition part = components(g, I);
  if (cmd.json) {
    json classes = json::array();
    for (const auto& c : part.classes) classes.push_back(ids_json(g, c));
    emit(out, {{"I", colors_json(I)}, {"classes", classes}});
    return 0;
  }
  out << "I = " << colors_text(I) << "\n";
  std::vector<std::vector<std::string>> rows{{"class", "I-closure", "hereditary I-closure"}};
  for (const auto& c : part.classes)
    rows.push_back({set_text(g, c), set_text(g, closure(part, c)),
                    set_text(g, closure(part, c, true))});
  print_table(out, rows);
  return 0;
}

int do_spectra(const Command& cmd, const KGraph& g, std::ostream& out) {
  std::vector<double> whole;
  for (int i = 0; i < g.rank(); ++i) whole.push_back(spectral_radius(to_real(g.matrix(i))));
  const ComponentPartition part = components(g, ColorSet::all(g.rank()));
  auto radii = [&](const VertexSet& c) {
    std::vector<double> rho;
    for (int i = 0; i < g.rank(); ++i)
      rho.push_back(spectral_radius(restrict_to(to_real(g.matrix(i)), c)));
    return rho;
  };
  if (cmd.json) {
    json j{{"spectral_radius", whole}};
    if (cmd.per_component) {
      json rows = json::array();
      for (const auto& c : part.classes)
        rows.push_back({{"component", ids_json(g, c)}, {"rho", radii(c)}});
      j["components"] = rows;
    }
    emit(out, j);
    return 0;
  }
  std::vector<std::vector<std::string>> rows{{""}};
  for (int i = 0; i < g.rank(); ++i) rows[0].push_back("rho(A_" + std::to_string(i + 1) + ")");
  rows.push_back({"all"});
  for (double r : whole) rows.back().push_back(num(r));
  if (cmd.per_component) {
    for (const auto& c : part.classes) {
      rows.push_back({set_text(g, c)});
      for (double r : radii(c)) rows.back().push_back(num(r));
    }
  }
  print_table(out, rows);
  return 0;
}

int do_subharmonic(const Command& cmd, const KGraph& g, std::ostream& out) {
  const Query q = make_query(cmd);
  const auto found = find_subharmonic(g, q, cmd.threads);
  if (cmd.json) {
    json list = json::array();
    for (const auto& sc : found) {
      json dominated = json::array();
      for (const auto& d : sc.dominated) dominated.push_back(ids_json(g, d));
      list.push_back({{"I", colors_json(sc.I)},
                      {"component", ids_json(g, sc.C)},
                      {"closure_I", ids_json(g, sc.closure_I)},
                      {"closure", ids_json(g, sc.closure_full)},
                      {"rho_component", sc.rho_C},
                      {"rho_closure", sc.rho_closure},
                      {"dominated", dominated}});
    }
    json j = query_json(q);
    j["components"] = list;
    emit(out, j);
    return 0;
  }
  out << "beta = " << num(q.beta) << ", r = " << r_text(q) << "\n";
  out << found.size() << " subharmonic components\n";
  std::vector<std::vector<std::string>> rows{{"I", "component", "I-closure", "closure"}};
  for (const auto& sc : found)
    rows.push_back({colors_text(sc.I), set_text(g, sc.C), set_text(g, sc.closure_I),
                    set_text(g, sc.closure_full)});
  print_table(out, rows);
  return 0;
}

int do_simplex(const Command& cmd, const KGraph& g, std::ostream& out) {
  const Query q = make_query(cmd);
  const SimplexDescription sd = simplex(g, q, {cmd.per_bound, cmd.threads});
  if (cmd.json) {
    json states = json::array();
    for (const auto& st : sd.states) {
      json gens = nullptr;
      if (st.per) gens = st.per->generators;
      states.push_back({{"I", colors_json(st.component.I)},
                        {"component", ids_json(g, st.component.C)},
                        {"y", vector_json(st.y)},
                        {"per_generators", gens},
                        {"per_complete", st.per ? st.per->complete : false},
                        {"factors_through_ck", st.factors_through_ck}});
    }
    json j = query_json(q);
    j["vertices"] = g.vertices();
    j["states"] = states;
    emit(out, j);
    return 0;
  }
  out << "beta = " << num(q.beta) << ", r = " << r_text(q) << "\n";
  if (q.beta == 0.0) out << "beta = 0: tracial states, computed as beta = 1 with r = 0\n";
  out << "vertices: ";
  for (int v = 0; v < g.vertex_count(); ++v) out << (v ? ", " : "") << g.vertex_id(v);
  out << "\n" << sd.states.size() << " extreme states\n";
  std::vector<std::vector<std::string>> rows{
      {"I", "component", "y", "Per", "Per search", "factors through CK"}};
  for (const auto& st : sd.states) {
    std::string search = "-";
    if (st.per && !st.per->complete) search = "bound " + std::to_string(st.per->search_bound);
    rows.push_back({colors_text(st.component.I), set_text(g, st.component.C), vector_text(st.y),
                    per_text(st), search, st.factors_through_ck ? "yes" : "no"});
  }
  print_table(out, rows);
  return 0;
}

int do_beta_table(const Command& cmd, const KGraph& g, std::ostream& out) {
  const Query q = make_query(cmd);
  const BetaTable table = beta_table(g, q);
  if (cmd.json) {
    json rows = json::array();
    for (const auto& row : table.rows)
      rows.push_back({{"I", colors_json(row.I)},
                      {"component", ids_json(g, row.C)},
                      {"beta_set", beta_set_json(row.beta_set)}});
    json j{{"r", table.r}, {"rows", rows}};
    if (table.log_bases) {
      json bases = json::array();
      for (const auto& a : *table.log_bases) bases.push_back(a.str());
      j["log_r"] = bases;
    }
    emit(out, j);
    return 0;
  }
  std::vector<VertexSet> columns;
  std::vector<ColorSet> row_keys;
  for (const auto& row : table.rows) {
    if (std::find(columns.begin(), columns.end(), row.C) == columns.end())
      columns.push_back(row.C);
    if (std::find(row_keys.begin(), row_keys.end(), row.I) == row_keys.end())
      row_keys.push_back(row.I);
  }
  std::sort(columns.begin(), columns.end());
  out << "r = " << r_text(q) << "\n";
  std::vector<std::vector<std::string>> grid{{"I \\ C"}};
  for (const auto& c : columns) grid[0].push_back(set_text(g, c));
  for (ColorSet I : row_keys) {
    std::vector<std::string> line{colors_text(I)};
    for (const auto& c : columns) {
      std::string cell = "-";
      for (const auto& row : table.rows)
        if (row.I == I && row.C == c) cell = beta_set_text(row.beta_set);
      line.push_back(cell);
    }
    grid.push_back(line);
  }
  print_table(out, grid);
  return 0;
}

int do_decompose(const Command& cmd, const KGraph& g, std::ostream& out) {
  const Query q = make_query(cmd);
  const VertexVector psi = read_vector(g, *cmd.vector_path);
  const auto weights = decompose_kms(g, psi, q);
  if (cmd.json) {
    json list = json::array();
    for (const auto& w : weights)
      list.push_back({{"I", colors_json(w.component.I)},
                      {"component", ids_json(g, w.component.C)},
                      {"weight", w.weight}});
    json j = query_json(q);
    j["weights"] = list;
    emit(out, j);
    return 0;
  }
  out << "beta = " << num(q.beta) << ", r = " << r_text(q) << "\n";
  std::vector<std::vector<std::string>> rows{{"I", "component", "weight"}};
  for (const auto& w : weights)
    rows.push_back({colors_text(w.component.I), set_text(g, w.component.C), num(w.weight)});
  print_table(out, rows);
  return 0;
}

int do_per(const Command& cmd, const KGraph& g, std::ostream& out) {
  const VertexSet C = parse_component(g, *cmd.component);
  const ColorSet I = parse_colors(g, cmd.colors);
  const int bound = cmd.bound.value_or(static_cast<int>(C.size()));
  const PeriodicityGroup per = periodicity_group(g, C, I, bound);
  if (cmd.json) {
    emit(out, {{"I", colors_json(I)},
               {"component", ids_json(g, C)},
               {"generators", per.generators},
               {"rank", per.rank()},
               {"search_bound", per.search_bound},
               {"complete", per.complete}});
    return 0;
  }
  ExtremeState view;
  view.per = per;
  out << "Per_" << colors_text(I) << "(" << set_text(g, C) << ") = " << per_text(view) << "\n";
  out << "rank " << per.rank();
  if (!per.complete) out << ", bounded search with |p_i| <= " << per.search_bound;
  out << "\n";
  return 0;
}

int do_eval(const Command& cmd, const KGraph& g, std::ostream& out) {
  const Query q = make_query(cmd);
  const VertexSet C = parse_component(g, *cmd.component);
  SimplexOptions options;
  options.per_bound = cmd.bound;
  const SimplexDescription sd = simplex(g, q, options);
  const ExtremeState* found = nullptr;
  for (const auto& st : sd.states)
    if (st.component.C == C) found = &st;
  if (!found)
    throw CertificationError(set_text(g, C) + " is not a subharmonic component at this (beta, r)");
  ExtremeState state = *found;
  if (cmd.theta) {
    std::vector<double> angles;
    for (const auto& item : split(*cmd.theta)) angles.push_back(parse_real(item));
    state.character = angles;
  }
  const Path lambda = parse_path(g, *cmd.lambda);
  const Path mu = parse_path(g, *cmd.mu);
  const StateValue value = state_eval(g, state, lambda, mu, q);
  if (cmd.json) {
    emit(out, {{"re", value.value.real()},
               {"im", value.value.imag()},
               {"I", colors_json(state.component.I)},
               {"component", ids_json(g, C)},
               {"incomplete_periodicity", value.incomplete_periodicity}});
    return 0;
  }
  out << "omega(S_lambda S_mu^*) = " << num(value.value.real());
  if (std::abs(value.value.imag()) > 1e-14 * std::max(1.0, std::abs(value.value)))
    out << (value.value.imag() < 0 ? " - " : " + ") << num(std::abs(value.value.imag())) << "i";
  out << "\n";
  if (value.incomplete_periodicity)
    out << "note: the periodicity group came from a bounded search\n";
  return 0;
}

int do_check(const Command& cmd, const KGraph& g, std::ostream& out, std::ostream& err) {
  const Query q = make_query(cmd);
  const CheckReport report = check_suite(g, q, cmd.seed, cmd.threads);
  std::size_t failed = 0;
  for (const auto& e : report.entries) failed += e.pass ? 0 : 1;
  if (cmd.json) {
    json list = json::array();
    for (const auto& e : report.entries)
      list.push_back({{"name", e.name},
                      {"pass", e.pass},
                      {"error", e.error},
                      {"tolerance", e.tolerance},
                      {"seed", e.seed},
                      {"note", e.note}});
    emit(out, {{"pass", report.pass()}, {"seed", cmd.seed}, {"checks", list}});
  } else {
    std::vector<std::vector<std::string>> rows{{"check", "result", "error", "tolerance", "note"}};
    for (const auto& e : report.entries)
      rows.push_back({e.name, e.pass ? "pass" : "FAIL", num(e.error), num(e.tolerance), e.note});
    print_table(out, rows);
    out << (report.pass() ? "all checks passed" : std::to_string(failed) + " checks failed")
        << "\n";
  }
  if (!report.pass()) {
    err << "error [CHECK_FAILED]: " << failed << " checks failed\n";
    return 1;
  }
  return 0;
}

}  // namespace

int execute(const Command& cmd, std::ostream& out, std::ostream& err) {
  if (cmd.verb == "help") {
    out << cmd.help_text;
    return 0;
  }
  try {
    const KGraph g = load_graph(cmd.graph_path);
    if (cmd.verb == "validate") return do_validate(cmd, g, out);
    if (cmd.verb == "components") return do_components(cmd, g, out);
    if (cmd.verb == "spectra") return do_spectra(cmd, g, out);
    if (cmd.verb == "subharmonic") return do_subharmonic(cmd, g, out);
    if (cmd.verb == "simplex") return do_simplex(cmd, g, out);
    if (cmd.verb == "beta-table") return do_beta_table(cmd, g, out);
    if (cmd.verb == "decompose") return do_decompose(cmd, g, out);
    if (cmd.verb == "per") return do_per(cmd, g, out);
    if (cmd.verb == "eval") return do_eval(cmd, g, out);
    if (cmd.verb == "check") return do_check(cmd, g, out, err);
    err << "usage error: unknown verb '" << cmd.verb << "'\n";
    return 2;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error [" << e.code() << "]: " << e.what() << "\n";
    return 1;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Command cmd;
  try {
    cmd = parse_args(args);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }
  return execute(cmd, out, err);
}

}  // namespace kgraph::cli
