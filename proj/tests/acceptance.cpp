// Acceptance gate: one criterion per invocation (argv[1] = 1..13), one
// PASS/FAIL line on stdout, exit 0/1. All tolerances are pinned here.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gasketpile/construct.hpp"
#include "gasketpile/engine.hpp"
#include "gasketpile/laplacian.hpp"
#include "gasketpile/measure.hpp"
#include "gasketpile/render.hpp"

using namespace gp;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << "\n    failed: " << what;
        }
    }
};

ExactRational pow3_inv(int k) {
    ExactRational r = 1;
    while (k--) r /= 3;
    return r;
}

ExactRational whole_integral(const ContinuationView& v) {
    return cell_integral(v, CellWord{});
}

SandpileConfig engine_identity(int level, SinkSpec sink = SinkSpec::Normal) {
    return identity(cached_gasket(level, sink), /*verify=*/false);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

// 1. engine identity == assembled identity, m = 2..6, under 60 s
void criterion_1(Check& c) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int m = 2; m <= 6; ++m) {
        const bool eq = engine_identity(m).heights ==
                        to_config(assemble_identity(m)).heights;
        c.expect(eq, "identity mismatch at level " + std::to_string(m));
    }
    const double dt = seconds_since(t0);
    c.expect(dt < 60.0, "runtime " + std::to_string(dt) + "s >= 60s");
}

// 2. exact whole-space integral of id_m equals 8/3 - 2*3^-m, m = 2..8
void criterion_2(Check& c) {
    ExactRational prev_err = 1;
    for (int m = 2; m <= 8; ++m) {
        const ExactRational got =
            whole_integral(make_view(engine_identity(m)));
        const ExactRational want = ExactRational(8, 3) - 2 * pow3_inv(m);
        c.expect(got == want, "integral at level " + std::to_string(m));
        const ExactRational err =
            boost::multiprecision::abs(got - ExactRational(8, 3));
        c.expect(err <= 2 * pow3_inv(m), "error bound at " + std::to_string(m));
        c.expect(err < prev_err, "error not decreasing at " + std::to_string(m));
        prev_err = err;
    }
}

// 3. depth-1 cells: |integral - 8/9| <= 3^-(m-1), m = 4..8
void criterion_3(Check& c) {
    for (int m = 4; m <= 8; ++m) {
        const ContinuationView v = make_view(engine_identity(m));
        for (const char* w : {"1", "2", "3"}) {
            const ExactRational err = boost::multiprecision::abs(
                cell_integral(v, CellWord::parse(w)) - ExactRational(8, 9));
            c.expect(err <= pow3_inv(m - 1),
                     std::string("cell ") + w + " at level " + std::to_string(m));
        }
    }
}

// 4. all depth-3 cells of id_8 within 3^-7 of 8/81
void criterion_4(Check& c) {
    const ContinuationView v = make_view(engine_identity(8));
    for (const char* a : {"1", "2", "3"})
        for (const char* b : {"1", "2", "3"})
            for (const char* d : {"1", "2", "3"}) {
                const std::string w = std::string(a) + b + d;
                const ExactRational err = boost::multiprecision::abs(
                    cell_integral(v, CellWord::parse(w)) - ExactRational(8, 81));
                c.expect(err <= pow3_inv(7), "cell " + w);
            }
}

// 5. neutrality on SG_5 for 100 seeded recurrent configs, under 30 s
void criterion_5(Check& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const GasketGraph& g = cached_gasket(5);
    const SandpileConfig id = engine_identity(5);
    c.expect(is_recurrent(id).recurrent, "identity fails the burning test");
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const SandpileConfig r = random_recurrent(g, seed);
        if (group_add(id, r).heights != r.heights) {
            c.expect(false, "not neutral at seed " + std::to_string(seed));
            break;
        }
    }
    const double dt = seconds_since(t0);
    c.expect(dt < 30.0, "runtime " + std::to_string(dt) + "s >= 30s");
}

// 6. abelian property and Laplacian identity on SG_3
void criterion_6(Check& c) {
    const GasketGraph& g = cached_gasket(3);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        std::mt19937_64 rng(seed);
        SandpileConfig cfg{&g, std::vector<std::uint64_t>(g.vertex_count())};
        for (auto& h : cfg.heights) h = rng() % 12;
        const StabilizeResult ref = stabilize(cfg, ToppleOrder::Fifo);
        for (ToppleOrder order :
             {ToppleOrder::Lifo, ToppleOrder::RandomOrder, ToppleOrder::Sweep,
              ToppleOrder::ParallelRounds}) {
            const StabilizeResult alt = stabilize(cfg, order, seed);
            c.expect(alt.config.heights == ref.config.heights &&
                         alt.odometer.topple_counts == ref.odometer.topple_counts,
                     "order disagreement at seed " + std::to_string(seed));
        }
        for (std::size_t v = 0; v < cfg.heights.size(); ++v) {
            BigInt expect = cfg.heights[v];
            expect -= BigInt(g.degree(v)) * ref.odometer.topple_counts[v];
            for (const auto& e : g.neighbors(v))
                expect +=
                    BigInt(e.multiplicity) * ref.odometer.topple_counts[e.to];
            if (expect != BigInt(ref.config.heights[v])) {
                c.expect(false, "Laplacian identity at seed " +
                                    std::to_string(seed));
                break;
            }
        }
    }
}

// 7. exhaustive burning count on SG_1 equals the reduced-Laplacian det
void criterion_7(Check& c) {
    const GasketGraph& g = cached_gasket(1);
    std::uint64_t count = 0;
    SandpileConfig cfg{&g, std::vector<std::uint64_t>(6, 0)};
    for (std::uint64_t code = 0; code < 4096; ++code) {
        std::uint64_t rest = code;
        for (std::size_t v = 0; v < 6; ++v, rest /= 4) cfg.heights[v] = rest % 4;
        count += is_recurrent(cfg).recurrent;
    }
    c.expect(BigInt(count) == group_order(g),
             "count " + std::to_string(count) + " != determinant");
}

// 8. generalized family: (1,2,3) converges to 2 with C = 8; (3,3,2) with
//    corner values 2 reproduces criterion 2's exact integrals
void criterion_8(Check& c) {
    for (int m = 2; m <= 8; ++m) {
        const ExactRational err = boost::multiprecision::abs(
            whole_integral(make_view(build_f(m, 1, 2, 3, 0, 0, 0))) -
            ExactRational(2));
        c.expect(err <= 8 * pow3_inv(m), "f error bound at " + std::to_string(m));
        // id_m is three rotated M_{m-1}(2,2,2) blocks, so the (3,3,2)
        // specialization at level m-1 with corners 2 carries its integral
        const ExactRational spec =
            whole_integral(make_view(build_f(m - 1, 3, 3, 2, 2, 2, 2)));
        c.expect(spec == ExactRational(8, 3) - 2 * pow3_inv(m),
                 "(3,3,2) specialization at " + std::to_string(m));
    }
}

// 9. alternate sinks: |∫id_m^top - 2| and |∫id_m^two - 8/3| strictly
//    decreasing for m = 4..8 with final values <= 0.05
void criterion_9(Check& c) {
    const ExactRational tol(1, 20);
    struct Case {
        SinkSpec sink;
        ExactRational limit;
        const char* name;
    };
    for (const Case& k :
         {Case{SinkSpec::TopCorner, ExactRational(2), "top"},
          Case{SinkSpec::TopAndRightCorners, ExactRational(8, 3), "two"}}) {
        ExactRational prev = -1, err = 0;
        for (int m = 4; m <= 8; ++m) {
            const ExactRational integral =
                whole_integral(make_view(engine_identity(m, k.sink)));
            err = boost::multiprecision::abs(integral - k.limit);
            c.detail << "\n    " << k.name << " m=" << m
                     << " integral=" << decimal_string(integral, 12)
                     << " |err|=" << decimal_string(err, 6);
            if (prev >= 0)
                c.expect(err < prev, std::string(k.name) +
                                         " error not decreasing at m=" +
                                         std::to_string(m));
            prev = err;
        }
        c.expect(err <= tol,
                 std::string(k.name) + " final error above 0.05");
    }
}

// 10. Monte Carlo within 3 standard errors of the exact integral
void criterion_10(Check& c) {
    struct Named {
        std::string name;
        ContinuationView view;
    };
    std::vector<Named> views;
    views.push_back({"id_2", make_view(assemble_identity(2))});
    views.push_back({"id_3", make_view(assemble_identity(3))});
    views.push_back({"M_3", make_view(build_M(3, 0, 0, 0))});
    views.push_back({"f_3", make_view(build_f(3, 1, 2, 3, 0, 0, 0))});
    for (const auto& nv : views) {
        const ExactRational exact = whole_integral(nv.view);
        const double exact_d =
            static_cast<double>(numerator(exact)) /
            static_cast<double>(denominator(exact));
        for (std::uint64_t seed : {101ULL, 202ULL, 303ULL}) {
            const MonteCarloResult mc =
                monte_carlo_integral(nv.view, CellWord{}, 100000, seed);
            c.expect(std::abs(mc.estimate - exact_d) <= 3 * mc.std_error,
                     nv.name + " seed " + std::to_string(seed) + ": est " +
                         std::to_string(mc.estimate) + " vs " +
                         std::to_string(exact_d) + " (3se = " +
                         std::to_string(3 * mc.std_error) + ")");
        }
    }
}

// 11. constant-1 calibration over every cell of depth <= 3, levels 3..6
void criterion_11(Check& c) {
    for (int level = 3; level <= 6; ++level) {
        const GasketGraph& g = cached_gasket(level);
        const ContinuationView one =
            make_view(ValueMap{&g, std::vector<double>(g.vertex_count(), 1.0)});
        std::vector<std::string> words{""};
        for (int d = 0; d < 3; ++d) {
            std::vector<std::string> next;
            for (const auto& w : words)
                if (static_cast<int>(w.size()) == d)
                    for (char l : {'1', '2', '3'}) next.push_back(w + l);
            words.insert(words.end(), next.begin(), next.end());
        }
        for (const auto& w : words) {
            const CellWord cw = CellWord::parse(w);
            c.expect(cell_integral(one, cw) ==
                         pow3_inv(static_cast<int>(cw.depth())),
                     "level " + std::to_string(level) + " cell '" + w + "'");
        }
    }
}

// 12. performance: stabilize(2*eta_max) on SG_9 < 10 s; identity on SG_8 < 30 s
void criterion_12(Check& c) {
    const GasketGraph& g9 = cached_gasket(9);
    SandpileConfig twice = max_config(g9);
    for (auto& h : twice.heights) h *= 2;
    auto t0 = std::chrono::steady_clock::now();
    const StabilizeResult r = stabilize(twice);
    const double dt9 = seconds_since(t0);
    c.expect(r.config.stable(), "SG_9 result not stable");
    c.expect(dt9 < 10.0, "SG_9 stabilize " + std::to_string(dt9) + "s >= 10s");

    t0 = std::chrono::steady_clock::now();
    const SandpileConfig id8 = identity(cached_gasket(8), /*verify=*/true);
    const double dt8 = seconds_since(t0);
    c.expect(!id8.heights.empty(), "SG_8 identity empty");
    c.expect(dt8 < 30.0, "SG_8 identity " + std::to_string(dt8) + "s >= 30s");
    c.detail << "\n    SG_9 stabilize: " << dt9 << "s, SG_8 identity: " << dt8
             << "s";
}

// 13. renders of id_2..id_5 use the red/blue palette only and the height
//     multiset matches the assembled construction
void criterion_13(Check& c) {
    for (int m = 2; m <= 5; ++m) {
        const SandpileConfig id = engine_identity(m);
        const ValueMap assembled = assemble_identity(m);
        std::vector<double> a(id.heights.begin(), id.heights.end());
        std::vector<double> b = assembled.values;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        c.expect(a == b, "value multiset mismatch at m=" + std::to_string(m));

        const std::string img = render(id, RenderSpec{});
        std::istringstream in(img);
        std::string magic;
        int w, h, maxval;
        in >> magic >> w >> h >> maxval;
        in.get();
        bool palette_ok = magic == "P6";
        for (int i = 0; i < w * h && palette_ok; ++i) {
            unsigned char px[3];
            in.read(reinterpret_cast<char*>(px), 3);
            const bool black = px[0] == 0 && px[1] == 0 && px[2] == 0;
            const bool red = px[0] == 255 && px[1] == 0 && px[2] == 0;
            const bool blue = px[0] == 0 && px[1] == 0 && px[2] == 255;
            palette_ok = black || red || blue;
        }
        c.expect(palette_ok, "non red/blue dot at m=" + std::to_string(m));
    }
}

const char* kDescriptions[] = {
    "",
    "structure theorem: engine identity == assembled identity, m=2..6",
    "whole-space integral of id_m equals 8/3 - 2*3^-m, m=2..8",
    "depth-1 cell integrals approach 8/9, m=4..8",
    "depth-3 cell integrals of id_8 within 3^-7 of 8/81",
    "identity neutrality on 100 recurrent configs, SG_5",
    "abelian property and Laplacian identity, SG_3",
    "exhaustive recurrence count equals group order, SG_1",
    "generalized family converges to (a+b+c)/3",
    "alternate-sink identity integrals approach 2 and 8/3",
    "Monte Carlo oracle within 3 standard errors",
    "constant-1 calibration: integral equals cell measure",
    "performance: SG_9 stabilize < 10s, SG_8 identity < 30s",
    "Figure-style renders: red/blue palette, matching multiset",
};

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: acceptance <criterion 1..13>\n";
        return 2;
    }
    const int n = std::atoi(argv[1]);
    if (n < 1 || n > 13) {
        std::cerr << "criterion out of range\n";
        return 2;
    }
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        switch (n) {
            case 1: criterion_1(c); break;
            case 2: criterion_2(c); break;
            case 3: criterion_3(c); break;
            case 4: criterion_4(c); break;
            case 5: criterion_5(c); break;
            case 6: criterion_6(c); break;
            case 7: criterion_7(c); break;
            case 8: criterion_8(c); break;
            case 9: criterion_9(c); break;
            case 10: criterion_10(c); break;
            case 11: criterion_11(c); break;
            case 12: criterion_12(c); break;
            case 13: criterion_13(c); break;
        }
    } catch (const std::exception& e) {
        c.expect(false, std::string("exception: ") + e.what());
    }
    std::cout << "criterion " << n << " (" << kDescriptions[n] << "): "
              << (c.ok ? "PASS" : "FAIL") << " [" << seconds_since(t0) << "s]"
              << c.detail.str() << "\n";
    return c.ok ? 0 : 1;
}
