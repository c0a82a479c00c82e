#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "pmbench/causal/dag.hpp"
#include "pmbench/causal/effects.hpp"
#include "pmbench/causal/features.hpp"
#include "pmbench/causal/separation.hpp"
#include "pmbench/rng.hpp"
#include "support/oracles.hpp"

using namespace pmbench;

namespace {

Dag chain_abc() {
    Dag d = Dag::from_edge_list("A -> B\nB -> C\n");
    return d;
}

std::vector<LabeledRecord> records_from_columns(const std::vector<double>& wear,
                                                const std::vector<double>& torque,
                                                const std::vector<int>& label) {
    std::vector<LabeledRecord> out;
    for (std::size_t i = 0; i < wear.size(); ++i) {
        MachineRecord r;
        r.udi = static_cast<std::int64_t>(i) + 1;
        r.air_temp = 300.0;
        r.process_temp = 310.0;
        r.rot_speed = 1500.0;
        r.torque = torque[i];
        r.tool_wear = wear[i];
        out.push_back({r, label[i] != 0});
    }
    return out;
}

}  // namespace

TEST_CASE("default failure-mechanism graph shape") {
    const Dag dag = build_default_dag();
    const DagValidation v = validate_dag(dag);
    CHECK(v.ok);

    std::set<std::string> failure_parents;
    std::set<std::string> torque_children;
    for (const auto& [p, c] : dag.edges()) {
        if (c == "failure") failure_parents.insert(p);
        if (p == "torque") torque_children.insert(c);
    }
    for (const char* required : {"temp_diff", "power", "overstrain"}) {
        CHECK(failure_parents.count(required) == 1);
    }
    CHECK(torque_children == std::set<std::string>{"power", "overstrain"});

    // torque reaches failure through both mechanism paths
    CHECK_FALSE(d_separated(dag, "torque", "failure", {}));
    CHECK_FALSE(d_separated(dag, "torque", "failure", {"power"}));
    CHECK_FALSE(d_separated(dag, "torque", "failure", {"overstrain"}));
    // conditioning on the mediators opens their collider parents (rot_speed,
    // tool_wear), so those must be blocked too before torque separates
    CHECK_FALSE(d_separated(dag, "torque", "failure", {"power", "overstrain"}));
    CHECK(d_separated(dag, "torque", "failure",
                      {"power", "overstrain", "tool_wear", "temp_diff"}));
}

TEST_CASE("validate_dag reports cycles and dangling endpoints") {
    Dag cyclic;
    cyclic.add_node("A");
    cyclic.add_node("B");
    cyclic.add_edge("A", "B");
    cyclic.add_edge("B", "A");
    const DagValidation v = validate_dag(cyclic);
    CHECK_FALSE(v.ok);
    CHECK(v.cycle.size() == 2);
    CHECK(v.message().find("A") != std::string::npos);
    CHECK(v.message().find("B") != std::string::npos);

    Dag dangling;
    dangling.add_node("A");
    dangling.add_edge("A", "Q");
    CHECK_THROWS_WITH(validate_dag(dangling), Catch::Matchers::ContainsSubstring("Q"));
    CHECK_THROWS_AS(validate_dag(dangling), GraphError);
}

TEST_CASE("edge-list round trip and parse errors") {
    const std::string text = "# mechanism graph\nA -> B\nB -> C # chained\n\nD\n";
    const Dag dag = Dag::from_edge_list(text);
    CHECK(dag.nodes() == std::vector<std::string>{"A", "B", "C", "D"});
    CHECK(dag.edges().size() == 2);

    const Dag again = Dag::from_edge_list(dag.to_edge_list());
    CHECK(again.nodes() == dag.nodes());
    CHECK(again.edges() == dag.edges());

    CHECK_THROWS_AS(Dag::from_edge_list("A B C\n"), GraphError);
    CHECK_THROWS_AS(Dag::from_edge_list("A ->\n"), GraphError);
}

TEST_CASE("textbook d-separation cases") {
    const Dag chain = chain_abc();
    CHECK(d_separated(chain, "A", "C", {"B"}));
    CHECK_FALSE(d_separated(chain, "A", "C", {}));

    const Dag fork = Dag::from_edge_list("B -> A\nB -> C\n");
    CHECK(d_separated(fork, "A", "C", {"B"}));
    CHECK_FALSE(d_separated(fork, "A", "C", {}));

    const Dag collider = Dag::from_edge_list("A -> B\nC -> B\n");
    CHECK(d_separated(collider, "A", "C", {}));
    CHECK_FALSE(d_separated(collider, "A", "C", {"B"}));

    // conditioning on a collider's descendant also opens it
    const Dag desc = Dag::from_edge_list("A -> B\nC -> B\nB -> D\n");
    CHECK_FALSE(d_separated(desc, "A", "C", {"D"}));

    CHECK_THROWS_AS(d_separated(chain, "A", "nope", {}), GraphError);
    CHECK(d_separated(chain, "C", "A", {"B"}));  // symmetry
}

TEST_CASE("d-separation matches the path-enumeration oracle exhaustively") {
    // all DAGs on up to 5 ordered nodes: every forward edge subset
    for (int n = 2; n <= 5; ++n) {
        std::vector<std::pair<int, int>> slots;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) slots.push_back({i, j});
        }
        const std::size_t combos = std::size_t{1} << slots.size();
        const std::size_t stride = n == 5 ? 7 : 1;  // sample every 7th 5-node graph
        for (std::size_t mask = 0; mask < combos; mask += stride) {
            Dag dag;
            std::vector<std::string> names;
            for (int i = 0; i < n; ++i) {
                names.push_back("n" + std::to_string(i));
                dag.add_node(names.back());
            }
            for (std::size_t s = 0; s < slots.size(); ++s) {
                if (mask & (std::size_t{1} << s)) {
                    dag.add_edge(names[slots[s].first], names[slots[s].second]);
                }
            }
            for (int x = 0; x < n; ++x) {
                for (int y = x + 1; y < n; ++y) {
                    const std::size_t zcombos = std::size_t{1} << n;
                    for (std::size_t zmask = 0; zmask < zcombos; ++zmask) {
                        if (zmask & ((std::size_t{1} << x) | (std::size_t{1} << y))) continue;
                        std::set<std::string> z;
                        for (int v = 0; v < n; ++v) {
                            if (zmask & (std::size_t{1} << v)) z.insert(names[v]);
                        }
                        const bool fast = d_separated(dag, names[x], names[y], z);
                        const bool slow = testsupport::d_separated_oracle(dag, names[x], names[y], z);
                        REQUIRE(fast == slow);
                    }
                }
            }
        }
    }
}

TEST_CASE("backdoor criterion on textbook graphs") {
    const Dag confounded = Dag::from_edge_list("Z -> X\nZ -> Y\nX -> Y\n");
    CHECK(satisfies_backdoor(confounded, "X", "Y", {"Z"}));
    CHECK_FALSE(satisfies_backdoor(confounded, "X", "Y", {}));

    // a descendant of the treatment disqualifies the set outright
    const Dag with_desc = Dag::from_edge_list("Z -> X\nZ -> Y\nX -> Y\nX -> D\n");
    CHECK_FALSE(satisfies_backdoor(with_desc, "X", "Y", {"Z", "D"}));

    const Dag chain = chain_abc();
    CHECK(satisfies_backdoor(chain, "A", "C", {}));

    CHECK_THROWS_AS(satisfies_backdoor(chain, "A", "A", {}), GraphError);
}

TEST_CASE("backdoor matches its oracle on the default graph and random graphs") {
    const Dag dag = build_default_dag();
    for (const std::string treatment : {"tool_wear", "torque", "rot_speed"}) {
        CHECK(satisfies_backdoor(dag, treatment, "failure", {}) ==
              testsupport::backdoor_oracle(dag, treatment, "failure", {}));
        CHECK(satisfies_backdoor(dag, treatment, "failure", {"machine_type"}) ==
              testsupport::backdoor_oracle(dag, treatment, "failure", {"machine_type"}));
    }

    Rng rng(777);
    for (int trial = 0; trial < 300; ++trial) {
        const Dag g = testsupport::random_dag(rng, 2 + static_cast<int>(rng.below(5)));
        const auto& names = g.nodes();
        const int x = static_cast<int>(rng.below(names.size()));
        int y = static_cast<int>(rng.below(names.size()));
        if (y == x) y = (y + 1) % static_cast<int>(names.size());
        std::set<std::string> z;
        for (const auto& nm : names) {
            if (nm != names[x] && nm != names[y] && rng.uniform01() < 0.3) z.insert(nm);
        }
        CHECK(satisfies_backdoor(g, names[x], names[y], z) ==
              testsupport::backdoor_oracle(g, names[x], names[y], z));
    }
}

TEST_CASE("minimal adjustment sets") {
    const Dag confounded = Dag::from_edge_list("Z -> X\nZ -> Y\nX -> Y\n");
    const auto z = find_minimal_adjustment_set(confounded, "X", "Y");
    REQUIRE(z.has_value());
    CHECK(*z == std::set<std::string>{"Z"});

    const auto empty = find_minimal_adjustment_set(chain_abc(), "A", "C");
    REQUIRE(empty.has_value());
    CHECK(empty->empty());

    // unblockable: hidden-style confounder that may not enter the set
    // (X <- U -> Y with U being the outcome's only other parent is still
    // adjustable by {U}; a truly unblockable case needs U adjacent to both
    // and excluded, which cannot happen with all nodes observed, so check
    // self-consistency on random graphs instead)
    Rng rng(4242);
    for (int trial = 0; trial < 100; ++trial) {
        const Dag g = testsupport::random_dag(rng, 3 + static_cast<int>(rng.below(5)));
        const auto& names = g.nodes();
        const int x = static_cast<int>(rng.below(names.size()));
        int y = static_cast<int>(rng.below(names.size()));
        if (y == x) y = (y + 1) % static_cast<int>(names.size());
        const auto best = find_minimal_adjustment_set(g, names[x], names[y]);
        if (best) {
            CHECK(satisfies_backdoor(g, names[x], names[y], *best));
            if (!best->empty()) {
                CHECK_FALSE(satisfies_backdoor(g, names[x], names[y], {}));
            }
        }
    }
}

TEST_CASE("derived causal features") {
    MachineRecord r;
    r.air_temp = 298.1;
    r.process_temp = 308.6;
    r.rot_speed = 1551;
    r.torque = 42.8;
    r.tool_wear = 0;
    const CausalFeatures f = derive_causal_features(r);
    CHECK_THAT(f.temp_diff, Catch::Matchers::WithinAbs(10.5, 1e-12));
    CHECK_THAT(f.power,
               Catch::Matchers::WithinRel(42.8 * 1551.0 * 2.0 * std::numbers::pi / 60.0, 1e-12));
    CHECK_THAT(f.power, Catch::Matchers::WithinAbs(6951.5, 1.0));
    CHECK(f.overstrain == 0.0);

    MachineRecord idle = r;
    idle.torque = 0.0;
    const CausalFeatures fi = derive_causal_features(idle);
    CHECK(fi.power == 0.0);
    CHECK(fi.overstrain == 0.0);

    MachineRecord worn = r;
    worn.tool_wear = 215.0;
    worn.torque = 56.0;
    CHECK(derive_causal_features(worn).overstrain == 12040.0);
}

TEST_CASE("effect estimation") {
    SECTION("two points give the exact slope") {
        // (x, y) = (0, 0) and (1, 2): temp_diff is 2 * tool_wear
        auto data = records_from_columns({0.0, 1.0}, {40.0, 40.0}, {0, 1});
        data[0].record.process_temp = data[0].record.air_temp;
        data[1].record.process_temp = data[1].record.air_temp + 2.0;
        const EffectEstimate est = estimate_effect(data, "tool_wear", "temp_diff", {});
        CHECK_THAT(est.coefficient, Catch::Matchers::WithinAbs(2.0, 1e-12));
    }

    SECTION("noise-free linear outcome is recovered to machine precision") {
        Rng rng(1);
        std::vector<double> wear(300), torque(300);
        std::vector<int> label(300, 0);
        for (std::size_t i = 0; i < wear.size(); ++i) {
            wear[i] = rng.uniform01() * 200.0;
            torque[i] = 20.0 + rng.uniform01() * 40.0;
        }
        auto data = records_from_columns(wear, torque, label);
        // outcome = power is a clean linear function of rot_speed at fixed torque;
        // use torque -> power with rot_speed fixed at 1500: power = torque * c
        const EffectEstimate est = estimate_effect(data, "torque", "power", {});
        const double c = 1500.0 * 2.0 * std::numbers::pi / 60.0;
        CHECK_THAT(est.coefficient, Catch::Matchers::WithinRel(c, 1e-12));
        CHECK(est.std_error < 1e-9);
    }

    SECTION("confounded synthetic structural model needs the adjustment") {
        // x = wear, z = torque (confounder z -> x, z -> y), y = 3x + 5z + noise
        Rng rng(2024);
        const std::size_t n = 10000;
        std::vector<LabeledRecord> data;
        std::vector<double> y_col(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double z = rng.normal() * 5.0 + 40.0;
            const double x = 2.0 * z + rng.normal() * 3.0;
            const double y = 3.0 * x + 5.0 * z + rng.normal() * 4.0;
            MachineRecord r;
            r.udi = static_cast<std::int64_t>(i) + 1;
            r.air_temp = 300.0;
            // encode y into process_temp so temp_diff == y (air fixed)
            r.process_temp = 300.0 + y;
            r.rot_speed = 1500.0;
            r.torque = z;
            r.tool_wear = std::max(0.0, x);
            data.push_back({r, false});
            y_col[i] = y;
        }
        const EffectEstimate adjusted =
            estimate_effect(data, "tool_wear", "temp_diff", {"torque"});
        CHECK(std::abs(adjusted.coefficient - 3.0) <= 3.0 * adjusted.std_error);

        const EffectEstimate naive = estimate_effect(data, "tool_wear", "temp_diff", {});
        CHECK(std::abs(naive.coefficient - 3.0) > 3.0 * naive.std_error);
        CHECK(naive.coefficient > adjusted.coefficient);  // positive confounding bias
    }

    SECTION("collinear adjustment column is a singularity error naming it") {
        // rot_speed is constant in these records, so it duplicates the
        // intercept column
        const auto data = records_from_columns({0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0},
                                               {40.0, 41.0, 39.0, 38.0, 42.0, 37.0, 43.0, 36.0},
                                               {0, 1, 0, 1, 0, 1, 0, 1});
        CHECK_THROWS_WITH(estimate_effect(data, "tool_wear", "failure", {"torque", "overstrain",
                                                                         "power", "rot_speed"}),
                          Catch::Matchers::ContainsSubstring("rot_speed"));
    }

    SECTION("machine_type expands to indicator columns in the adjustment") {
        Rng rng(6);
        std::vector<LabeledRecord> data;
        for (int i = 0; i < 90; ++i) {
            MachineRecord r;
            r.udi = i + 1;
            r.machine_type = static_cast<MachineType>(i % 3);
            r.air_temp = 300.0;
            r.process_temp = 305.0 + rng.normal();
            r.rot_speed = 1400.0 + 10.0 * rng.normal();
            r.torque = 40.0 + rng.normal();
            r.tool_wear = 100.0 + 10.0 * rng.normal();
            data.push_back({r, rng.uniform01() < 0.3});
        }
        const EffectEstimate est =
            estimate_effect(data, "tool_wear", "failure", {"machine_type"});
        CHECK(std::isfinite(est.coefficient));
        CHECK(est.std_error > 0.0);
        CHECK_THROWS_AS(estimate_effect(data, "machine_type", "failure", {}), GraphError);
    }
}
