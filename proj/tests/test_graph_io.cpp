#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "mlsbm/graph.hpp"
#include "mlsbm/io.hpp"
#include "oracles.hpp"

using namespace mlsbm;
using namespace mlsbm::io;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("mlsbm_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& text) {
  fs::path p = dir / name;
  std::ofstream out(p);
  out << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("graph builder sums duplicates and canonicalizes orientation") {
  GraphBuilder b(3, 2, false, false);
  b.add_weight(0, 2, 1, 1);
  b.add_weight(0, 1, 2, 2);  // same undirected dyad
  b.add_weight(1, 0, 2, 5);
  MultilayerGraph g = b.build();
  REQUIRE(g.edges(0).size() == 1);
  CHECK(g.edges(0)[0] == Edge{1, 2, 3});
  CHECK(g.weight(2, 1, 0) == 3);
  CHECK(g.weight(1, 2, 0) == 3);
  CHECK(g.weight(0, 1, 0) == 0);
  CHECK(g.total_weight(0) == 3);
  CHECK(g.total_weight() == 8);
  CHECK(g.n_edges() == 2);

  CHECK_THROWS_AS(b.add_weight(0, 3, 0, 1), UsageError);   // node out of range
  CHECK_THROWS_AS(b.add_weight(2, 0, 1, 1), UsageError);   // layer out of range
  CHECK_THROWS_AS(b.add_weight(0, 0, 0, 1), UsageError);   // self loop disallowed
  CHECK_THROWS_AS(b.add_weight(0, 0, 1, -1), UsageError);  // negative weight
}

TEST_CASE("dyad universe size follows directedness and self-loop policy") {
  CHECK(oracle::shape_graph(5, 1, true, true).n_dyads_per_layer() == 25);
  CHECK(oracle::shape_graph(5, 1, true, false).n_dyads_per_layer() == 20);
  CHECK(oracle::shape_graph(5, 1, false, true).n_dyads_per_layer() == 15);
  CHECK(oracle::shape_graph(5, 1, false, false).n_dyads_per_layer() == 10);
  for (bool dir : {true, false})
    for (bool self : {true, false}) {
      MultilayerGraph g = oracle::shape_graph(6, 1, dir, self);
      std::size_t n = 0;
      for_each_dyad(g, [&](int i, int j) {
        ++n;
        if (!self) CHECK(i != j);
        if (!dir) CHECK(i <= j);
      });
      CHECK(n == g.n_dyads_per_layer());
    }
}

TEST_CASE("layer restriction keeps edges and names in the requested order") {
  std::vector<std::vector<Edge>> e(3);
  e[0] = {{0, 1, 1}};
  e[1] = {{1, 2, 4}};
  e[2] = {{0, 2, 7}};
  MultilayerGraph g(3, 3, true, true, e);
  g.set_layer_names({"alpha", "beta", "gamma"});
  MultilayerGraph r = g.restricted_to_layers({2, 0});
  CHECK(r.n_layers() == 2);
  CHECK(r.edges(0)[0] == Edge{0, 2, 7});
  CHECK(r.edges(1)[0] == Edge{0, 1, 1});
  CHECK(r.layer_names()[0] == "gamma");
  CHECK(r.layer_names()[1] == "alpha");
  CHECK_THROWS_AS(g.restricted_to_layers({0, 0}), UsageError);
  CHECK_THROWS_AS(g.restricted_to_layers({3}), UsageError);
}

TEST_CASE("masked-edge removal deletes exactly the masked dyads of one layer") {
  std::vector<std::vector<Edge>> e(2);
  e[0] = {{0, 1, 2}, {1, 2, 1}};
  e[1] = {{0, 1, 5}};
  MultilayerGraph g(3, 2, true, false, e);
  LayerMask mask;
  mask.layer = 0;
  mask.dyads = {{0, 1}, {2, 0}};
  CHECK(mask.contains(0, 1));
  CHECK_FALSE(mask.contains(1, 0));
  validate_mask(g, mask);
  MultilayerGraph t = g.without_masked_edges(mask);
  CHECK(t.weight(0, 1, 0) == 0);
  CHECK(t.weight(1, 2, 0) == 1);
  CHECK(t.weight(0, 1, 1) == 5);  // other layers untouched

  LayerMask bad = mask;
  bad.dyads = {{2, 0}, {0, 1}};  // unsorted
  CHECK_THROWS_AS(validate_mask(g, bad), UsageError);
  bad.dyads = {{0, 0}};  // self dyad outside the universe
  CHECK_THROWS_AS(validate_mask(g, bad), UsageError);
  bad.dyads = {{0, 3}};  // out of range
  CHECK_THROWS_AS(validate_mask(g, bad), UsageError);
  bad.dyads = {{0, 1}};
  bad.layer = 2;
  CHECK_THROWS_AS(validate_mask(g, bad), UsageError);
}

TEST_CASE("edge list parsing: basic construction and aggregation") {
  fs::path dir = scratch_dir("io_basic");
  fs::path p = write_file(dir, "a.txt", "a b 1 0\nb c 0 2\n");
  MultilayerGraph g = read_edge_list(p);
  CHECK(g.n_nodes() == 3);
  CHECK(g.n_layers() == 2);
  CHECK(g.directed());  // default when no directive
  CHECK(g.node_labels() == std::vector<std::string>{"a", "b", "c"});
  CHECK(g.weight(0, 1, 0) == 1);
  CHECK(g.weight(1, 2, 1) == 2);
  CHECK(g.n_edges() == 2);

  fs::path dup = write_file(dir, "dup.txt", "a b 1 0\na b 1 0\n");
  CHECK(read_edge_list(dup).weight(0, 1, 0) == 2);
}

TEST_CASE("edge list parsing: errors carry the line number") {
  fs::path dir = scratch_dir("io_err");
  auto line_of = [](const fs::path& p) -> std::string {
    try {
      read_edge_list(p.string());
    } catch (const ParseError& e) {
      const std::string msg = e.what();
      auto colon = msg.find(':');
      REQUIRE(colon != std::string::npos);
      return msg.substr(colon + 1, msg.find(':', colon + 1) - colon - 1);
    }
    FAIL("expected a parse error");
    return "";
  };
  CHECK(line_of(write_file(dir, "neg.txt", "a b -1 0\n")) == "1");
  CHECK(line_of(write_file(dir, "ragged.txt", "a b 1 0\na c 1\n")) == "2");
  fs::path frac = write_file(dir, "frac.txt", "a b 1.5\n");
  CHECK_THROWS_AS(read_edge_list(frac), ParseError);
  fs::path empty = write_file(dir, "empty.txt", "");
  CHECK_THROWS_AS(read_edge_list(empty), ParseError);
}

TEST_CASE("edge list parsing: header directives and undirected merging") {
  fs::path dir = scratch_dir("io_hdr");
  fs::path p = write_file(dir, "u.txt",
                          "# directed=false layers=2 names=phone,email\n"
                          "b a 1 0\na b 2 0\nc a 0 3\n");
  MultilayerGraph g = read_edge_list(p);
  CHECK_FALSE(g.directed());
  CHECK_FALSE(g.allow_self_loops());  // no diagonal line present
  CHECK(g.layer_names() == std::vector<std::string>{"phone", "email"});
  CHECK(g.node_labels() == std::vector<std::string>{"b", "a", "c"});  // first appearance
  CHECK(g.weight(0, 1, 0) == 3);  // b-a and a-b merged
  CHECK(g.weight(1, 2, 1) == 3);  // a-c

  fs::path self = write_file(dir, "self.txt", "# directed=false layers=1\na a 2\na b 1\n");
  CHECK(read_edge_list(self).allow_self_loops());  // diagonal line switches the universe

  ParseOptions opt;
  opt.allow_self_loops = true;
  CHECK(read_edge_list(p, opt).allow_self_loops());
  ParseOptions flip;
  flip.directed = true;
  CHECK(read_edge_list(p, flip).directed());
}

TEST_CASE("edge list serialization round trips canonically") {
  for (bool dir : {true, false}) {
    auto [g, p] = oracle::random_instance(dir ? 31 : 32, dir ? Mode::DirectedFull : Mode::UndirectedFull,
                                          dir, 10, 2, 3);
    (void)p;
    fs::path d = scratch_dir(dir ? "io_rt_d" : "io_rt_u");
    fs::path f = d / "g.txt";
    write_edge_list(g, f.string());
    MultilayerGraph back = read_edge_list(f.string());
    CHECK(back == g);
    // serialize -> parse -> serialize is byte-identical
    fs::path f2 = d / "g2.txt";
    write_edge_list(back, f2.string());
    CHECK(slurp(f) == slurp(f2));
  }
}

TEST_CASE("membership files round trip labels and values") {
  fs::path dir = scratch_dir("io_memb");
  Matrix m(3, 2);
  m << 0.25, 0.75, 1.0, 0.0, 0.125, 0.5;
  std::vector<std::string> labels = {"x", "y", "z"};
  fs::path p = dir / "u.txt";
  write_membership(labels, m, p.string());
  Membership back = read_membership(p.string());
  CHECK(back.labels == labels);
  REQUIRE(back.values.rows() == 3);
  REQUIRE(back.values.cols() == 2);
  CHECK((back.values - m).cwiseAbs().maxCoeff() == 0.0);

  fs::path bad = write_file(dir, "bad.txt", "x 0.5 0.5\ny 0.5\n");
  CHECK_THROWS_AS(read_membership(bad.string()), ParseError);
  fs::path neg = write_file(dir, "neg.txt", "x 0.5 -0.5\n");
  CHECK_THROWS_AS(read_membership(neg.string()), ParseError);
}

TEST_CASE("affinity files round trip layer blocks") {
  fs::path dir = scratch_dir("io_aff");
  std::vector<Matrix> w(2, Matrix(2, 2));
  w[0] << 0.04, 0.004, 0.004, 0.04;
  w[1] << 1.0, 0.0, 0.0, 0.5;
  std::vector<std::string> names = {"first", "second"};
  fs::path p = dir / "w.txt";
  write_affinities(w, names, p.string());
  std::vector<std::string> back_names;
  std::vector<Matrix> back = read_affinities(p.string(), &back_names);
  REQUIRE(back.size() == 2);
  CHECK(back_names == names);
  for (int a = 0; a < 2; ++a)
    CHECK((back[static_cast<std::size_t>(a)] - w[static_cast<std::size_t>(a)]).cwiseAbs().maxCoeff() ==
          0.0);
}

TEST_CASE("mask files round trip") {
  fs::path dir = scratch_dir("io_mask");
  eval::HoldoutMask m;
  m.target_layer = 1;
  m.n_folds = 5;
  m.dyads = {{0, 1}, {0, 2}, {3, 4}};
  m.fold_of = {4, 0, 2};
  fs::path p = dir / "mask.txt";
  write_mask(m, p.string());
  eval::HoldoutMask back = read_mask(p.string());
  CHECK(back.target_layer == m.target_layer);
  CHECK(back.n_folds == m.n_folds);
  CHECK(back.dyads == m.dyads);
  CHECK(back.fold_of == m.fold_of);

  fs::path bad = write_file(dir, "bad.txt", "0 1 2\n");
  CHECK_THROWS_AS(read_mask(bad.string()), ParseError);
}

TEST_CASE("mode names parse and print consistently") {
  for (Mode m : {Mode::DirectedFull, Mode::UndirectedFull, Mode::DirectedDiagonal,
                 Mode::UndirectedDiagonal})
    CHECK(mode_from_name(mode_name(m)) == m);
  CHECK(mode_name(Mode::DirectedFull) == "directed-full");
  CHECK_THROWS_AS(mode_from_name("triangular"), UsageError);
}
