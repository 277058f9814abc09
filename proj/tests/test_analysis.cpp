#include "doctest.h"

#include <cmath>
#include <numeric>
#include <set>

#include "mssc/analysis.hpp"
#include "mssc/reduction.hpp"
#include "mssc/rng.hpp"

using namespace mssc;

namespace {

Instance random_small_instance(int n, int m, int r, Rng& rng) {
    std::vector<Element> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (int i = n - 1; i > 0; --i)
        std::swap(order[i], order[rng.bounded(static_cast<std::uint64_t>(i) + 1)]);
    std::vector<std::vector<Element>> requests;
    for (int t = 0; t < m; ++t) {
        const int q = 1 + static_cast<int>(rng.bounded(r));
        std::set<Element> members;
        while (static_cast<int>(members.size()) < q)
            members.insert(static_cast<Element>(rng.bounded(n)));
        requests.emplace_back(members.begin(), members.end());
    }
    return make_instance(n, order, requests);
}

}  // namespace

TEST_CASE("parameter construction") {
    const PotentialParams r2 = make_params(2);
    CHECK(r2.alpha == 7);
    CHECK(r2.beta == 31);
    CHECK(r2.gamma == 8);
    CHECK(r2.kappa == 5);
    CHECK(r2.algorithm_part_constant() == 480);
    CHECK(r2.opt_part_constant() == 1952);

    const PotentialParams r1 = make_params(1);
    CHECK(r1.gamma == 1);
    CHECK(r1.beta == 10);
    CHECK(r1.kappa == 4);

    const PotentialParams r3 = make_params(3);
    CHECK(r3.beta == 52);
    CHECK(r3.gamma == 15);
    CHECK(r3.kappa == 6);

    CHECK_THROWS_AS(make_params(0), std::invalid_argument);
}

TEST_CASE("parameter relations hold for r = 1..64") {
    for (int r = 1; r <= 64; ++r) {
        const PotentialParams p = make_params(r);
        CHECK(p.alpha >= 7);
        CHECK(p.gamma >= p.alpha * (r - 2) + 8);
        CHECK(p.beta >= p.alpha * (r - 1) + 2 * p.gamma + 8);
        CHECK((Cost{1} << p.kappa) >= p.beta);
        CHECK(p.beta >= 2 * p.gamma);
    }
}

TEST_CASE("potential piecewise values") {
    const PotentialParams params = make_params(2);  // alpha 7, beta 31, gamma 8, kappa 5

    CHECK(potential_value(0, 0, 0, params) == 0);
    CHECK(potential_value(3, 0, 4, params) == 28);     // low case: 7 * 4
    CHECK(potential_value(6, 0, 0, params) == 1984);   // high case: 31 * 64
    CHECK(potential_value(6, 0, 128, params) == 31 * 64 - 8 * 128);

    CHECK_THROWS_AS(potential_value(0, 0, 3, params), BudgetInvariantError);
    CHECK_THROWS_AS(potential_value(2, 0, -1, params), BudgetInvariantError);
}

TEST_CASE("potential over partitionings") {
    const PotentialParams params = make_params(2);
    const Partitioning p = Partitioning::from_chunks(2, {0, 1, 1});
    const Partitioning p_star = Partitioning::from_chunks(2, {1, 0, 1});
    BudgetTable budgets(3);
    budgets[1] = 2;
    // kappa = 5 swamps every chunk gap at w=2, so all elements sit in the
    // low case.
    CHECK(potential(1, p, p_star, budgets, params) == 14);
    CHECK(total_potential(p, p_star, budgets, params) == 14);
}

TEST_CASE("audit of seeded runs against the ec optimum") {
    Rng rng(61);
    for (int i = 0; i < 10; ++i) {
        const Instance inst = random_small_instance(7, 6, 2, rng);
        const EcOptTrace opt = opt_ec_dynamic(inst);
        const PotentialParams params = make_params(2);
        const Partitioning p0 = canonic_partitioning(inst.initial_permutation);
        for (int s = 0; s < 5; ++s) {
            const LmaRunTrace run =
                run_lma(p0, inst.requests, derive_seed(1000 + i, s), /*keep_states=*/true);
            const PotentialAudit audit = audit_run(run, opt, params);
            CHECK(audit.phi_initial == 0);
            CHECK(audit.lemma8_ok);
            CHECK(audit.lemma6_ok);
            CHECK(audit.corollary4_ok);
            CHECK(audit.phi_final >= 0);
            // steps where the optimum stays put leave the potential alone
            for (const StepAudit& sa : audit.per_step)
                if (sa.opt_delta_opt == 0) CHECK(sa.opt_delta_phi == 0);
        }
    }
}

TEST_CASE("audit of a zero-length run") {
    const Instance inst = make_instance(3, {0, 1, 2}, {});
    const EcOptTrace opt = opt_ec_dynamic(inst);
    const PotentialParams params = make_params(1);
    const LmaRunTrace run = run_lma(canonic_partitioning(inst.initial_permutation),
                                    inst.requests, 5, /*keep_states=*/true);
    const PotentialAudit audit = audit_run(run, opt, params);
    CHECK(audit.phi_initial == 0);
    CHECK(audit.phi_final == 0);
    CHECK(audit.per_step.empty());
}

TEST_CASE("audit_many aggregates lemma 7 checks") {
    Rng rng(67);
    const Instance inst = random_small_instance(7, 5, 2, rng);
    const EcOptTrace opt = opt_ec_dynamic(inst);
    const AuditReport report = audit_many(inst, opt, make_params(2), 77, 300);
    CHECK(report.lemma8_ok);
    CHECK(report.lemma6_ok);
    CHECK(report.corollary4_ok);
    CHECK(report.lemma7_ok);
    CHECK(report.total_ok);
    CHECK(report.lemma7_steps.size() == 5);
    CHECK(report.all_ok());
}

TEST_CASE("lemma 4 exact expectation at small width is zero") {
    // With kappa = 5 and w = 3, no chunk can be 5 below another, so every
    // member sits in the unchanged case.
    const PotentialParams params = make_params(2);
    const Partitioning p = canonic_partitioning(Permutation::identity(7));
    const Partitioning p_star = canonic_partitioning(Permutation::from_order({6, 5, 4, 3, 2, 1, 0}));
    BudgetTable budgets(7);
    for (int i = 0; i < 2; ++i) {
        const Lemma4Check check = check_lemma4(i, p, p_star, budgets, params, 100, 7);
        CHECK(check.exact_sum == 0);
        CHECK(check.holds);
        CHECK(check.sample_mean == 0.0);
    }
}

TEST_CASE("lemma 4 worst-case synthetic chunk") {
    // w = 8, i = 6, kappa = 5: the only S_6 members that can pay are those
    // the optimum keeps in chunks <= i - kappa = 1, at most
    // |S*_0| + |S*_1| = 3 of them.
    const int w = 8;
    const int n = (1 << w) - 1;
    const PotentialParams params = make_params(2);
    std::vector<int> alg_chunks(n);
    {
        int idx = 0;
        for (int c = 0; c < w; ++c)
            for (int k = 0; k < (1 << c); ++k) alg_chunks[idx++] = c;
    }
    // elements 63..126 form S_6 under the algorithm; pin three of them to
    // the front chunks of the optimum's partitioning
    std::vector<int> opt_chunks(n);
    {
        std::vector<int> caps(w);
        for (int c = 0; c < w; ++c) caps[c] = 1 << c;
        opt_chunks[63] = 0;
        --caps[0];
        opt_chunks[64] = 1;
        opt_chunks[65] = 1;
        caps[1] -= 2;
        int c = 0;
        for (int x = 0; x < n; ++x) {
            if (x >= 63 && x <= 65) continue;
            while (caps[c] == 0) ++c;
            opt_chunks[x] = c;
            --caps[c];
        }
    }
    const Partitioning p = Partitioning::from_chunks(w, alg_chunks);
    const Partitioning p_star = Partitioning::from_chunks(w, opt_chunks);
    BudgetTable budgets(n);  // zero budgets maximize the case-2 deltas

    const Lemma4Check check = check_lemma4(6, p, p_star, budgets, params, 2000, 13);
    // element 63 stays in the high case and jumps by beta * 2^6; 64 and 65
    // cross into it at beta * 2^7 each; the integer bound is 2^{2*6+2}
    CHECK(check.exact_sum == 31 * 64 + 2 * (31 * 128));
    CHECK(check.holds);
    CHECK(check.exact_mean <= check.bound);
    // the fraction of low-p* members respects the counting bound 2^{-kappa+1}
    int low = 0;
    for (Element a : p.members(6))
        if (p_star.chunk(a) <= 6 - params.kappa) ++low;
    CHECK(static_cast<double>(low) / 64.0 < 1.0 / 16.0);
    // Monte-Carlo sits near the exact mean
    CHECK(std::abs(check.sample_mean - check.exact_mean) <=
          hoeffding_slack(31 * 128, check.num_samples));
}

TEST_CASE("mtf construction from the optimum") {
    // repeated front requests: the optimum never reorders, mtf matches it
    const Instance front = make_instance(3, {0, 1, 2}, {{0}, {0}, {0}});
    const MsscOptTrace opt_front = opt_mssc_dynamic(front);
    const MtfOfflineTrace mtf_front = build_mtf_from_opt(opt_front, front);
    CHECK(mtf_front.total_on_instance == opt_front.total);
    CHECK(mtf_front.within_2x_opt);

    // the {c},{c} example: optimum totals 6, the construction stays within 12
    const Instance twice = make_instance(3, {0, 1, 2}, {{2}, {2}});
    const MsscOptTrace opt_twice = opt_mssc_dynamic(twice);
    const MtfOfflineTrace mtf_twice = build_mtf_from_opt(opt_twice, twice);
    CHECK(opt_twice.total == 6);
    CHECK(mtf_twice.total_on_instance <= 12);
    CHECK(mtf_twice.within_2x_opt);

    // singleton requests: the singleton instance J coincides with I
    Rng rng(71);
    const Instance single = random_small_instance(5, 8, 1, rng);
    const MsscOptTrace opt_single = opt_mssc_dynamic(single);
    const MtfOfflineTrace mtf_single = build_mtf_from_opt(opt_single, single);
    for (std::size_t t = 0; t < single.requests.size(); ++t)
        CHECK(mtf_single.designated[t] == single.requests[t].members()[0]);
    CHECK(mtf_single.total_on_instance == mtf_single.total_on_singletons);
}

TEST_CASE("offline ec shadow of an mtf trace") {
    // moving from position 5 (chunk 2) costs 4+2+4 = 10 <= 6 * 4
    const Instance deep = make_instance(7, {0, 1, 2, 3, 4, 5, 6}, {{4}});
    const MsscOptTrace opt = opt_mssc_dynamic(deep);
    const MtfOfflineTrace mtf = build_mtf_from_opt(opt, deep);
    REQUIRE(mtf.moved_from_position[0] == 5);
    const EcOfflineTrace off = build_off_e_from_mtf(mtf, deep);
    CHECK(off.per_step[0].second == 10);
    CHECK(off.within_6x_per_step);

    // v = 2: movement 2 + 2 = 4 <= 6 * 1
    const Instance shallow = make_instance(3, {0, 1, 2}, {{1}});
    const MtfOfflineTrace mtf2 = build_mtf_from_opt(opt_mssc_dynamic(shallow), shallow);
    REQUIRE(mtf2.moved_from_position[0] == 2);
    const EcOfflineTrace off2 = build_off_e_from_mtf(mtf2, shallow);
    CHECK(off2.per_step[0].second == 4);
    CHECK(off2.within_6x_per_step);

    // v = 1: neither side reorders
    const Instance front = make_instance(3, {0, 1, 2}, {{0}});
    const MtfOfflineTrace mtf3 = build_mtf_from_opt(opt_mssc_dynamic(front), front);
    const EcOfflineTrace off3 = build_off_e_from_mtf(mtf3, front);
    CHECK(off3.per_step[0].second == 0);
    CHECK(off3.within_6x_per_step);
}

TEST_CASE("lemma 2 and 3 chain on random instances") {
    Rng rng(73);
    for (int i = 0; i < 25; ++i) {
        const Instance inst = random_small_instance(3 + static_cast<int>(rng.bounded(5)), 7, 2, rng);
        const MsscOptTrace opt = opt_mssc_dynamic(inst);
        const MtfOfflineTrace mtf = build_mtf_from_opt(opt, inst);
        // the 2x claim can fail in this cost model (see the counterexample
        // case below); the paid-exchange bound 4 OPT - 3m always holds
        CHECK(mtf.within_4x_minus_3m);
        CHECK(mtf.total_on_instance <= mtf.total_on_singletons);
        const EcOfflineTrace off = build_off_e_from_mtf(mtf, inst);
        CHECK(off.within_6x_per_step);
        // the offline EC shadow upper-bounds the exact EC optimum
        const EcOptTrace ec_opt = opt_ec_dynamic(inst);
        CHECK(ec_opt.total <= off.total);
        CHECK(ec_opt.total <= 6 * mtf.total_on_instance);
    }
}

TEST_CASE("mtf pays more than twice the optimum on rotating singletons") {
    // pi_0 = (a,b,c) with requests {b},{c},{a}: the optimum stays put for
    // 2+3+1 = 6, while the only MTF-based solution pays
    // (2+1)+(3+2)+(3+2) = 13 > 12. Moving the accessed element is free in
    // the classic list-update model but costs v-1 swaps here, which is why
    // the factor 2 does not transfer.
    const Instance inst = make_instance(3, {0, 1, 2}, {{1}, {2}, {0}});
    const MsscOptTrace opt = opt_mssc_dynamic(inst);
    CHECK(opt.total == 6);
    const MtfOfflineTrace mtf = build_mtf_from_opt(opt, inst);
    CHECK(mtf.total_on_instance == 13);
    CHECK_FALSE(mtf.within_2x_opt);
    CHECK(mtf.within_4x_minus_3m);  // 13 <= 24 - 9
}

TEST_CASE("hoeffding slack shrinks with samples") {
    CHECK(hoeffding_slack(100.0, 100) == doctest::Approx(15.0));
    CHECK(hoeffding_slack(100.0, 10000) == doctest::Approx(1.5));
}
