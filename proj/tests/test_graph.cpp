#include <doctest.h>

#include <wavegraph/graph.hpp>

using namespace wavegraph;

namespace {

Graph data_graph(const char* name) {
    return load_graph(std::string(WAVEGRAPH_DATA_DIR) + "/" + name);
}

Graph ring_graph(double len1 = 70.0, double len2 = 30.0) {
    // single passthrough vertex closed by one bond = plain ring; use two
    // passthroughs so both bonds are genuine
    Graph g;
    g.vertices.push_back({0, VertexKind::Passthrough, 0, 1.0, {}, {0, 1}});
    g.vertices.push_back({1, VertexKind::Passthrough, 0, 1.0, {}, {2, 3}});
    g.bonds.push_back({0, 2, len1});
    g.bonds.push_back({3, 1, len2});
    return g;
}

}  // namespace

TEST_CASE("bundled graph files load and validate") {
    const Graph btg = data_graph("btg.json");
    CHECK(btg.vertices.size() == 5);
    CHECK(btg.bonds.size() == 10);
    CHECK(btg.total_length() == doctest::Approx(1597.07).epsilon(1e-12));
    CHECK(btg.io_bond == 2);
    CHECK(btg.n_eff == doctest::Approx(2.4));
    CHECK(btg.n_g == doctest::Approx(3.97));
    for (const auto& v : btg.vertices) {
        CHECK(v.kind == VertexKind::Coupler);
        CHECK(v.coupling == doctest::Approx(0.5));
    }

    const Graph fg = data_graph("fg.json");
    CHECK(fg.vertices.size() == 5);
    CHECK(fg.bonds.size() == 10);
    CHECK(fg.total_length() == doctest::Approx(1750.41).epsilon(1e-12));
    CHECK(fg.io_bond == 0);
}

TEST_CASE("bundled graphs have pairwise incommensurate bond lengths") {
    CHECK(lengths_incommensurate(bond_lengths(data_graph("btg.json"))));
    CHECK(lengths_incommensurate(bond_lengths(data_graph("fg.json"))));
}

TEST_CASE("lengths_incommensurate rejects simple rational ratios") {
    CHECK_FALSE(lengths_incommensurate({100.0, 150.0}));       // 3:2
    CHECK_FALSE(lengths_incommensurate({70.0, 70.0}));         // 1:1
    CHECK_FALSE(lengths_incommensurate({10.0, 490.0}));        // 49:1
    CHECK(lengths_incommensurate({100.0, 100.0 * 1.4142135623730951}));
}

TEST_CASE("directed bond basis indexing") {
    const Graph btg = data_graph("btg.json");
    const DirectedBondBasis basis(btg);
    CHECK(basis.size() == 20);
    for (int d = 0; d < basis.size(); ++d) {
        CHECK(basis.reverse(basis.reverse(d)) == d);
        CHECK(basis.bond_of(d) == d / 2);
        // the reverse direction swaps head and tail
        CHECK(basis.head_port(d) == basis.tail_port(basis.reverse(d)));
        CHECK(basis.length(d) == btg.bonds[d / 2].length_um);
    }
    // forward direction of bond 0 runs from its from_port to its to_port
    CHECK(basis.tail_port(0) == btg.bonds[0].from_port);
    CHECK(basis.head_port(0) == btg.bonds[0].to_port);
}

TEST_CASE("phase index models") {
    const Graph g = data_graph("btg.json");
    const double k0 = 2.0 * std::numbers::pi / g.reference_wavelength_um;
    CHECK(g.phase_index(k0, IndexModel::ConstantNeff) == doctest::Approx(2.4));
    // at the reference wavenumber the dispersive model equals n_eff
    CHECK(g.phase_index(k0, IndexModel::LinearDispersion) ==
          doctest::Approx(2.4).epsilon(1e-14));
    // d(n k)/dk = n_g for the linear model
    const double h = 1e-6;
    const double d =
        ((k0 + h) * g.phase_index(k0 + h, IndexModel::LinearDispersion) -
         (k0 - h) * g.phase_index(k0 - h, IndexModel::LinearDispersion)) /
        (2.0 * h);
    CHECK(d == doctest::Approx(g.n_g).epsilon(1e-9));
}

TEST_CASE("validate accepts a minimal ring") {
    CHECK_NOTHROW(validate(ring_graph()));
}

TEST_CASE("validate rejects malformed graphs") {
    SUBCASE("wrong vertex degree") {
        Graph g = ring_graph();
        g.vertices[0].ports.push_back(7);
        CHECK_THROWS_AS(validate(g), std::invalid_argument);
    }
    SUBCASE("coupling outside [0,1]") {
        Graph g = data_graph("btg.json");
        g.vertices[2].coupling = 1.5;
        CHECK_THROWS_AS(validate(g), std::invalid_argument);
    }
    SUBCASE("reflector with |r| != 1") {
        Graph g;
        g.vertices.push_back({0, VertexKind::Reflector, 0, 0.5, {}, {0}});
        g.vertices.push_back({1, VertexKind::Reflector, 0, 1.0, {}, {1}});
        g.bonds.push_back({0, 1, 10.0});
        CHECK_THROWS_AS(validate(g), std::invalid_argument);
    }
    SUBCASE("dangling port") {
        Graph g = ring_graph();
        g.bonds.pop_back();
        CHECK_THROWS_AS(validate(g), std::invalid_argument);
    }
    SUBCASE("port used by two bond ends") {
        Graph g = ring_graph();
        g.bonds[1] = {0, 1, 30.0};  // port 0 already used by bond 0
        CHECK_THROWS_AS(validate(g), std::invalid_argument);
    }
    SUBCASE("bond referencing an unknown port") {
        Graph g = ring_graph();
        g.bonds[1].to_port = 99;
        CHECK_THROWS_AS(validate(g), std::invalid_argument);
    }
    SUBCASE("non-positive length") {
        Graph g = ring_graph();
        g.bonds[0].length_um = 0.0;
        CHECK_THROWS_AS(validate(g), std::invalid_argument);
    }
    SUBCASE("custom vertex with non-square matrix") {
        Graph g = ring_graph();
        g.vertices[0].kind = VertexKind::Custom;
        g.vertices[0].scattering = Matrix::Zero(2, 3);
        CHECK_THROWS_AS(validate(g), std::invalid_argument);
    }
}

TEST_CASE("JSON parsing errors") {
    SUBCASE("unknown vertex kind") {
        nlohmann::json j = {
            {"n_eff", 2.4},
            {"n_g", 3.97},
            {"vertices", {{{"id", 0}, {"kind", "prism"}, {"ports", {0}}}}},
            {"bonds", nlohmann::json::array()}};
        CHECK_THROWS_AS(graph_from_json(j), std::invalid_argument);
    }
    SUBCASE("missing required field") {
        nlohmann::json j = {{"n_eff", 2.4}};
        CHECK_THROWS(graph_from_json(j));
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_graph("/nonexistent/graph.json"),
                        std::runtime_error);
    }
}
