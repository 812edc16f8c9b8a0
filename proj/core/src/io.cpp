#include "mlsbm/io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <unordered_map>

namespace mlsbm::io {

namespace {

[[noreturn]] void fail(const std::string& path, std::size_t line, const std::string& msg) {
  throw ParseError(path + ":" + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string join_csv(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += items[i];
  }
  return out;
}

bool parse_ll(const std::string& tok, long long* out) {
  const char* b = tok.data();
  const char* e = b + tok.size();
  auto res = std::from_chars(b, e, *out);
  return res.ec == std::errc() && res.ptr == e;
}

bool parse_double(const std::string& tok, double* out) {
  const char* b = tok.data();
  const char* e = b + tok.size();
  auto res = std::from_chars(b, e, *out);
  return res.ec == std::errc() && res.ptr == e;
}

bool parse_bool(const std::string& tok, bool* out) {
  if (tok == "true") {
    *out = true;
    return true;
  }
  if (tok == "false") {
    *out = false;
    return true;
  }
  return false;
}

void check_token_safe(const std::string& s, const char* what) {
  if (s.empty()) throw UsageError(std::string(what) + " must not be empty");
  for (char c : s)
    if (c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r')
      throw UsageError(std::string(what) + " '" + s + "' contains whitespace or a comma");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot open '" + path + "' for writing");
  out << std::setprecision(17);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open for reading");
  return in;
}

}  // namespace

MultilayerGraph read_edge_list(const std::string& path, const ParseOptions& opts) {
  std::ifstream in = open_in(path);

  std::optional<bool> hdr_directed, hdr_self;
  std::optional<int> hdr_layers;
  std::vector<std::string> layer_names;
  std::vector<std::string> labels;
  std::unordered_map<std::string, int> index;
  auto intern = [&](const std::string& label) {
    auto it = index.find(label);
    if (it != index.end()) return it->second;
    const int id = static_cast<int>(labels.size());
    labels.push_back(label);
    index.emplace(label, id);
    return id;
  };

  struct Entry {
    int layer, i, j;
    long long w;
  };
  std::vector<Entry> entries;
  int n_cols = -1;  // layer count implied by the data lines
  bool saw_diag = false;
  std::size_t diag_line = 0;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens[0][0] == '#') {
      // Directive lines are comments whose first key is recognized.
      std::vector<std::string> body = tokens;
      body[0] = body[0].substr(1);
      if (body[0].empty()) body.erase(body.begin());
      if (body.empty()) continue;
      const auto is_directive = [](const std::string& t) {
        return t.rfind("directed=", 0) == 0 || t.rfind("layers=", 0) == 0 ||
               t.rfind("selfloops=", 0) == 0 || t.rfind("names=", 0) == 0 ||
               t.rfind("nodes=", 0) == 0;
      };
      if (!is_directive(body[0])) continue;
      for (const std::string& tok : body) {
        if (!is_directive(tok)) fail(path, line_no, "unknown directive token '" + tok + "'");
        const auto eq = tok.find('=');
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "directed" || key == "selfloops") {
          bool b;
          if (!parse_bool(val, &b)) fail(path, line_no, key + " must be true or false");
          (key == "directed" ? hdr_directed : hdr_self) = b;
        } else if (key == "layers") {
          long long l;
          if (!parse_ll(val, &l) || l < 1) fail(path, line_no, "layers must be a positive integer");
          hdr_layers = static_cast<int>(l);
        } else if (key == "names") {
          layer_names = split_csv(val);
        } else {  // nodes
          for (const std::string& lab : split_csv(val)) {
            if (lab.empty()) fail(path, line_no, "empty node label in nodes directive");
            if (index.count(lab)) fail(path, line_no, "duplicate node label '" + lab + "'");
            intern(lab);
          }
        }
      }
      continue;
    }

    if (tokens.size() < 3)
      fail(path, line_no, "expected 'src tgt w_1 ... w_L' with at least one layer");
    const int cols = static_cast<int>(tokens.size()) - 2;
    if (n_cols < 0)
      n_cols = cols;
    else if (cols != n_cols)
      fail(path, line_no, "inconsistent weight column count");
    const int i = intern(tokens[0]);
    const int j = intern(tokens[1]);
    if (i == j && !saw_diag) {
      saw_diag = true;
      diag_line = line_no;
    }
    for (int a = 0; a < cols; ++a) {
      long long w;
      if (!parse_ll(tokens[static_cast<std::size_t>(a) + 2], &w) || w < 0)
        fail(path, line_no, "weights must be nonnegative integers");
      if (w > 0) entries.push_back({a, i, j, w});
    }
  }

  if (n_cols >= 0 && hdr_layers && *hdr_layers != n_cols)
    throw ParseError(path + ": header declares " + std::to_string(*hdr_layers) +
                     " layers but data lines have " + std::to_string(n_cols));
  const int n_layers = n_cols >= 0 ? n_cols : hdr_layers.value_or(0);
  if (n_layers < 1) throw ParseError(path + ": no data lines and no layers directive");
  if (labels.empty()) throw ParseError(path + ": no nodes found");
  if (!layer_names.empty() && static_cast<int>(layer_names.size()) != n_layers)
    throw ParseError(path + ": names directive does not match the layer count");

  const bool directed = opts.directed.value_or(hdr_directed.value_or(true));
  const bool self =
      opts.allow_self_loops.value_or(hdr_self.value_or(directed ? true : saw_diag));
  if (saw_diag && !self)
    fail(path, diag_line, "self-loop present but self-loops are disabled");

  GraphBuilder builder(static_cast<int>(labels.size()), n_layers, directed, self);
  for (const Entry& e : entries) builder.add_weight(e.layer, e.i, e.j, e.w);
  MultilayerGraph g = builder.build();
  g.set_node_labels(std::move(labels));
  if (!layer_names.empty()) g.set_layer_names(std::move(layer_names));
  return g;
}

void write_edge_list(const MultilayerGraph& g, const std::string& path) {
  for (const auto& l : g.node_labels()) check_token_safe(l, "node label");
  for (const auto& n : g.layer_names()) check_token_safe(n, "layer name");

  std::ofstream out = open_out(path);
  out << "# directed=" << (g.directed() ? "true" : "false") << " layers=" << g.n_layers()
      << " selfloops=" << (g.allow_self_loops() ? "true" : "false")
      << " names=" << join_csv(g.layer_names()) << "\n";
  out << "# nodes=" << join_csv(g.node_labels()) << "\n";

  std::map<std::pair<int, int>, std::vector<long long>> rows;
  for (int a = 0; a < g.n_layers(); ++a)
    for (const Edge& e : g.edges(a)) {
      auto& r = rows[{e.i, e.j}];
      if (r.empty()) r.assign(static_cast<std::size_t>(g.n_layers()), 0);
      r[static_cast<std::size_t>(a)] = e.weight;
    }
  for (const auto& [dyad, w] : rows) {
    out << g.node_labels()[static_cast<std::size_t>(dyad.first)] << ' '
        << g.node_labels()[static_cast<std::size_t>(dyad.second)];
    for (long long x : w) out << ' ' << x;
    out << "\n";
  }
}

Membership read_membership(const std::string& path) {
  std::ifstream in = open_in(path);
  Membership m;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  int k = -1;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = split_ws(line);
    if (tokens.empty() || tokens[0][0] == '#') continue;
    if (tokens.size() < 2) fail(path, line_no, "expected 'label x_1 ... x_K'");
    const int cols = static_cast<int>(tokens.size()) - 1;
    if (k < 0)
      k = cols;
    else if (cols != k)
      fail(path, line_no, "inconsistent column count");
    m.labels.push_back(tokens[0]);
    std::vector<double> row(static_cast<std::size_t>(cols));
    for (int c = 0; c < cols; ++c) {
      if (!parse_double(tokens[static_cast<std::size_t>(c) + 1], &row[static_cast<std::size_t>(c)]))
        fail(path, line_no, "bad numeric value '" + tokens[static_cast<std::size_t>(c) + 1] + "'");
      if (row[static_cast<std::size_t>(c)] < 0.0)
        fail(path, line_no, "membership values must be nonnegative");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path + ": no membership rows");
  m.values.resize(static_cast<int>(rows.size()), k);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int c = 0; c < k; ++c) m.values(static_cast<int>(i), c) = rows[i][static_cast<std::size_t>(c)];
  return m;
}

void write_membership(const std::vector<std::string>& labels, const Matrix& values,
                      const std::string& path) {
  if (static_cast<int>(labels.size()) != values.rows())
    throw UsageError("label count does not match the membership rows");
  for (const auto& l : labels) check_token_safe(l, "node label");
  std::ofstream out = open_out(path);
  for (int i = 0; i < values.rows(); ++i) {
    out << labels[static_cast<std::size_t>(i)];
    for (int c = 0; c < values.cols(); ++c) out << ' ' << values(i, c);
    out << "\n";
  }
}

std::vector<Matrix> read_affinities(const std::string& path,
                                    std::vector<std::string>* layer_names) {
  std::ifstream in = open_in(path);
  std::vector<Matrix> out;
  std::vector<std::string> names;
  std::vector<std::vector<double>> block;
  std::size_t block_line = 0;

  auto flush = [&](std::size_t at) {
    if (block.empty()) {
      if (!names.empty() && names.size() > out.size())
        fail(path, at, "layer block has no rows");
      return;
    }
    const int k = static_cast<int>(block.size());
    Matrix w(k, k);
    for (int r = 0; r < k; ++r) {
      if (static_cast<int>(block[static_cast<std::size_t>(r)].size()) != k)
        fail(path, block_line, "affinity blocks must be square");
      for (int c = 0; c < k; ++c) w(r, c) = block[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
    if (!out.empty() && out.front().rows() != k)
      fail(path, block_line, "all layers must share one group count");
    out.push_back(std::move(w));
    block.clear();
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens[0][0] == '#') {
      if (tokens.size() >= 2 && tokens[1] == "layer") {
        flush(line_no);
        names.push_back(tokens.size() >= 4 ? tokens[3] : "layer" + std::to_string(out.size()));
        block_line = line_no;
      }
      continue;
    }
    std::vector<double> row(tokens.size());
    for (std::size_t c = 0; c < tokens.size(); ++c)
      if (!parse_double(tokens[c], &row[c]))
        fail(path, line_no, "bad numeric value '" + tokens[c] + "'");
    block.push_back(std::move(row));
  }
  flush(line_no + 1);
  if (out.empty()) throw ParseError(path + ": no affinity blocks");
  if (names.size() != out.size()) throw ParseError(path + ": layer headers do not match blocks");
  if (layer_names) *layer_names = std::move(names);
  return out;
}

void write_affinities(const std::vector<Matrix>& w, const std::vector<std::string>& layer_names,
                      const std::string& path) {
  if (!layer_names.empty() && layer_names.size() != w.size())
    throw UsageError("layer name count does not match the affinity count");
  std::ofstream out = open_out(path);
  for (std::size_t a = 0; a < w.size(); ++a) {
    const std::string name =
        layer_names.empty() ? "layer" + std::to_string(a) : layer_names[a];
    check_token_safe(name, "layer name");
    out << "# layer " << a << ' ' << name << "\n";
    for (int r = 0; r < w[a].rows(); ++r) {
      for (int c = 0; c < w[a].cols(); ++c) out << (c ? " " : "") << w[a](r, c);
      out << "\n";
    }
  }
}

eval::HoldoutMask read_mask(const std::string& path) {
  std::ifstream in = open_in(path);
  eval::HoldoutMask m;
  bool have_header = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens[0][0] == '#') {
      for (const std::string& raw : tokens) {
        std::string tok = raw[0] == '#' ? raw.substr(1) : raw;
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq);
        long long val;
        if (!parse_ll(tok.substr(eq + 1), &val)) fail(path, line_no, "bad header value");
        if (key == "target") {
          m.target_layer = static_cast<int>(val);
          have_header = true;
        } else if (key == "folds") {
          m.n_folds = static_cast<int>(val);
          have_header = true;
        }
      }
      continue;
    }
    if (tokens.size() != 4) fail(path, line_no, "expected 'layer i j fold'");
    long long layer, i, j, fold;
    if (!parse_ll(tokens[0], &layer) || !parse_ll(tokens[1], &i) || !parse_ll(tokens[2], &j) ||
        !parse_ll(tokens[3], &fold))
      fail(path, line_no, "expected integer fields");
    if (layer != m.target_layer) fail(path, line_no, "row layer does not match the mask target");
    if (fold < 0 || fold >= m.n_folds) fail(path, line_no, "fold out of range");
    m.dyads.push_back(Dyad{static_cast<int>(i), static_cast<int>(j)});
    m.fold_of.push_back(static_cast<int>(fold));
  }
  if (!have_header) throw ParseError(path + ": missing '# target=... folds=...' header");
  if (m.dyads.empty()) throw ParseError(path + ": no mask rows");
  return m;
}

void write_mask(const eval::HoldoutMask& mask, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "# target=" << mask.target_layer << " folds=" << mask.n_folds << "\n";
  for (std::size_t d = 0; d < mask.dyads.size(); ++d)
    out << mask.target_layer << ' ' << mask.dyads[d].i << ' ' << mask.dyads[d].j << ' '
        << mask.fold_of[d] << "\n";
}

}  // namespace mlsbm::io
