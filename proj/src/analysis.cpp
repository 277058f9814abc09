#include "mssc/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "mssc/parallel.hpp"
#include "mssc/reduction.hpp"
#include "mssc/rng.hpp"

namespace mssc {

PotentialParams make_params(int r) {
    if (r < 1) throw std::invalid_argument("make_params: r must be >= 1");
    PotentialParams params;
    params.r = r;
    params.alpha = 7;
    params.gamma = 7 * static_cast<Cost>(r) - 6;
    params.beta = 21 * static_cast<Cost>(r) - 11;
    params.kappa = static_cast<int>(std::bit_width(static_cast<std::uint64_t>(params.beta - 1)));
    if (params.alpha < 7 || params.gamma < params.alpha * (r - 2) + 8 ||
        params.beta < params.alpha * (r - 1) + 2 * params.gamma + 8 ||
        (Cost{1} << params.kappa) < params.beta)
        throw std::logic_error("make_params: parameter relations violated");
    return params;
}

Cost potential_value(int p_z, int p_star_z, Cost b_z, const PotentialParams& params) {
    const Cost size = Cost{1} << p_z;
    if (b_z < 0 || b_z > 2 * size)
        throw BudgetInvariantError("potential: budget outside [0, 2 * 2^{p(z)}]");
    Cost value;
    if (p_z <= p_star_z + params.kappa) {
        value = params.alpha * b_z;
    } else {
        value = params.beta * size - params.gamma * b_z;
    }
    if (value < 0) throw std::logic_error("potential: negative value");
    return value;
}

Cost potential(Element z, const Partitioning& p, const Partitioning& p_star,
               const BudgetTable& budgets, const PotentialParams& params) {
    return potential_value(p.chunk(z), p_star.chunk(z), budgets[z], params);
}

Cost total_potential(const Partitioning& p, const Partitioning& p_star,
                     const BudgetTable& budgets, const PotentialParams& params) {
    Cost total = 0;
    for (Element z = 0; z < p.n(); ++z) total += potential(z, p, p_star, budgets, params);
    return total;
}

PotentialAudit audit_run(const LmaRunTrace& lma, const EcOptTrace& opt,
                         const PotentialParams& params) {
    const std::size_t m = lma.steps.size();
    if (lma.states.size() != m + 1 || lma.budgets.size() != m + 1)
        throw std::invalid_argument("audit_run: trace must be recorded with keep_states");
    if (opt.states.size() != m + 1)
        throw std::invalid_argument("audit_run: trace and oracle step counts differ");
    if (!lma.states.empty() && opt.states[0].n() != lma.states[0].n())
        throw UniverseMismatchError("audit_run: trace and oracle universes differ");

    PotentialAudit audit;
    audit.seed = lma.seed;
    audit.phi_initial = total_potential(lma.states[0], opt.states[0], lma.budgets[0], params);
    bool first_margin8 = true;
    bool first_margin6 = true;
    for (std::size_t t = 1; t <= m; ++t) {
        const Partitioning& p_prev = lma.states[t - 1];
        const Partitioning& p_next = lma.states[t];
        const BudgetTable& b_prev = lma.budgets[t - 1];
        const BudgetTable& b_next = lma.budgets[t];
        const Partitioning& ps_prev = opt.states[t - 1];
        const Partitioning& ps_next = opt.states[t];
        const EcStepRecord& step = lma.steps[t - 1];

        // Cross-check trace/oracle alignment via the optimum's access cost.
        const RequestSet request(step.request);
        if (ec_access_cost(ps_prev, request) != opt.per_step[t - 1].first)
            throw std::invalid_argument("audit_run: request stream does not match the oracle");

        const Cost phi_before = total_potential(p_prev, ps_prev, b_prev, params);
        const Cost phi_mid = total_potential(p_next, ps_prev, b_next, params);
        const Cost phi_after = total_potential(p_next, ps_next, b_next, params);

        StepAudit sa;
        sa.alg_delta_lma = step.total_cost();
        sa.alg_delta_phi = phi_mid - phi_before;
        sa.alg_delta_opt = opt.per_step[t - 1].first;
        sa.opt_delta_phi = phi_after - phi_mid;
        sa.opt_delta_opt = opt.per_step[t - 1].second;
        audit.per_step.push_back(sa);
        audit.lma_total += sa.alg_delta_lma;

        // Lemma 8: the opt part is bounded deterministically, step by step.
        const Cost bound8 = params.opt_part_constant() * sa.opt_delta_opt;
        const Cost margin8 = bound8 - sa.opt_delta_phi;
        if (margin8 < 0) audit.lemma8_ok = false;
        if (sa.opt_delta_opt > 0) {
            ++audit.opt_move_steps;
            if (first_margin8 || margin8 < audit.lemma8_worst_margin)
                audit.lemma8_worst_margin = margin8;
            first_margin8 = false;
        }

        // Lemma 6: a budget-loop fetch only fires while the target's
        // potential covers 7x its chunk size.
        for (std::size_t f = 1; f < step.fetches.size(); ++f) {
            const FetchRecord& fetch_rec = step.fetches[f];
            const Cost phi_z = potential_value(fetch_rec.from_chunk,
                                               ps_prev.chunk(fetch_rec.target),
                                               fetch_rec.budget_before, params);
            const Cost margin6 = phi_z - 7 * (Cost{1} << fetch_rec.from_chunk);
            if (first_margin6 || margin6 < audit.lemma6_worst_margin)
                audit.lemma6_worst_margin = margin6;
            first_margin6 = false;
            if (margin6 < 0) audit.lemma6_ok = false;
        }
    }
    audit.phi_final =
        total_potential(lma.states[m], opt.states[m], lma.budgets[m], params);
    // potential_value throws on any negative value, so reaching this point
    // certifies Corollary 4 for every audited boundary.
    audit.corollary4_ok = true;
    return audit;
}

double hoeffding_slack(double range_width, int samples, double sigmas) {
    return sigmas * range_width / (2.0 * std::sqrt(static_cast<double>(samples)));
}

AuditReport audit_many(const Instance& instance, const EcOptTrace& opt,
                       const PotentialParams& params, std::uint64_t master_seed,
                       int num_seeds, double sigmas, unsigned jobs) {
    if (num_seeds < 1) throw std::invalid_argument("audit_many: num_seeds must be >= 1");
    AuditReport report;
    report.params = params;
    report.master_seed = master_seed;
    report.num_seeds = num_seeds;
    report.opt_total = opt.total;

    const Partitioning p0 = canonic_partitioning(instance.initial_permutation);
    const std::size_t m = instance.requests.size();

    std::vector<PotentialAudit> audits(num_seeds);
    parallel_for(static_cast<std::size_t>(num_seeds), [&](std::size_t i) {
        const std::uint64_t seed = derive_seed(master_seed, i);
        LmaRunTrace run = run_lma(p0, instance.requests, seed, /*keep_states=*/true);
        audits[i] = audit_run(run, opt, params);
    }, jobs);

    bool first8 = true;
    for (const PotentialAudit& audit : audits) {
        report.lemma8_ok = report.lemma8_ok && audit.lemma8_ok;
        report.lemma6_ok = report.lemma6_ok && audit.lemma6_ok;
        report.corollary4_ok = report.corollary4_ok && audit.corollary4_ok;
        report.opt_move_steps_audited += audit.opt_move_steps;
        if (audit.opt_move_steps > 0 &&
            (first8 || audit.lemma8_worst_margin < report.lemma8_worst_margin)) {
            report.lemma8_worst_margin = audit.lemma8_worst_margin;
            first8 = false;
        }
    }

    // Per-observation range bound for the algorithm part: access plus at
    // most r fetches below 3 * 2^{w-1} each, and n potentials each within
    // [0, beta * 2^{w-1}].
    const int w = p0.w();
    const double top_chunk = static_cast<double>(Cost{1} << (w - 1));
    const double lma_max = (1.0 + 3.0 * params.r) * top_chunk;
    const double phi_max = static_cast<double>(instance.n) * static_cast<double>(params.beta) * top_chunk;
    const double step_width = lma_max + 2.0 * phi_max;

    report.lemma7_ok = true;
    for (std::size_t t = 0; t < m; ++t) {
        Cost sum = 0;
        for (const PotentialAudit& audit : audits)
            sum += audit.per_step[t].alg_delta_lma + audit.per_step[t].alg_delta_phi;
        Lemma7StepStat stat;
        stat.step = static_cast<int>(t) + 1;
        stat.mean = static_cast<double>(sum) / num_seeds;
        stat.bound = static_cast<double>(params.algorithm_part_constant()) *
                     static_cast<double>(audits.empty() ? 0 : audits[0].per_step[t].alg_delta_opt);
        stat.slack = hoeffding_slack(step_width, num_seeds, sigmas);
        stat.ok = stat.mean <= stat.bound + stat.slack;
        report.lemma7_ok = report.lemma7_ok && stat.ok;
        report.lemma7_steps.push_back(stat);
    }

    Cost total_sum = 0;
    for (const PotentialAudit& audit : audits) total_sum += audit.lma_total;
    report.mean_lma_total = static_cast<double>(total_sum) / num_seeds;
    const Cost max_const = std::max(params.algorithm_part_constant(), params.opt_part_constant());
    report.total_bound = static_cast<double>(max_const) * static_cast<double>(opt.total);
    report.total_slack = hoeffding_slack(static_cast<double>(m) * step_width, num_seeds, sigmas);
    report.total_ok = report.mean_lma_total <= report.total_bound + report.total_slack;
    return report;
}

Lemma4Check check_lemma4(int chunk_index, const Partitioning& p, const Partitioning& p_star,
                         const BudgetTable& budgets, const PotentialParams& params,
                         int num_samples, std::uint64_t seed) {
    if (chunk_index < 0 || chunk_index >= p.w() - 1)
        throw std::invalid_argument("check_lemma4: chunk index must be in [0, w-1)");
    const auto& members = p.members(chunk_index);

    Lemma4Check check;
    check.chunk_index = chunk_index;
    std::vector<Cost> deltas;
    deltas.reserve(members.size());
    for (Element a : members) {
        const Cost before = potential_value(chunk_index, p_star.chunk(a), budgets[a], params);
        const Cost after = potential_value(chunk_index + 1, p_star.chunk(a), budgets[a], params);
        deltas.push_back(after - before);
        check.exact_sum += after - before;
    }
    const double chunk_cardinality = static_cast<double>(members.size());
    check.exact_mean = static_cast<double>(check.exact_sum) / chunk_cardinality;
    check.bound = static_cast<double>(Cost{1} << (chunk_index + 2));
    // exact_sum <= 2^{2i+2} is the integer form of mean <= 2^{i+2}.
    check.holds = check.exact_sum <= (Cost{1} << (2 * chunk_index + 2));
    if (!check.holds)
        throw std::logic_error("check_lemma4: exact expectation exceeds 2^{i+2}");

    check.num_samples = num_samples;
    if (num_samples > 0) {
        Rng rng(seed);
        Cost sample_sum = 0;
        for (int s = 0; s < num_samples; ++s)
            sample_sum += deltas[rng.bounded(deltas.size())];
        check.sample_mean = static_cast<double>(sample_sum) / num_samples;
    }
    return check;
}

MtfOfflineTrace build_mtf_from_opt(const MsscOptTrace& opt, const Instance& instance) {
    const std::size_t m = instance.requests.size();
    if (opt.states.size() != m + 1)
        throw std::invalid_argument("build_mtf_from_opt: oracle trace length mismatch");

    MtfOfflineTrace trace;
    trace.opt_total = opt.total;
    trace.states.push_back(instance.initial_permutation);
    for (std::size_t t = 1; t <= m; ++t) {
        const RequestSet& request = instance.requests[t - 1];
        // The singleton instance J takes the member the optimum holds
        // closest to its front when the request arrives.
        Element designated = -1;
        int best_pos = opt.states[t - 1].n() + 1;
        for (Element x : request.members()) {
            const int pos = opt.states[t - 1].position(x);
            if (pos < best_pos) {
                best_pos = pos;
                designated = x;
            }
        }
        trace.designated.push_back(designated);

        const Permutation& pi = trace.states.back();
        const int v = pi.position(designated);
        trace.moved_from_position.push_back(v);
        const Cost access_on_instance = access_cost_mssc(pi, request);
        const Cost reorder = v - 1;
        trace.per_step.emplace_back(access_on_instance, reorder);
        trace.total_on_instance += access_on_instance + reorder;
        trace.total_on_singletons += v + reorder;

        if (v == 1) {
            trace.states.push_back(pi);
        } else {
            std::vector<Element> order = pi.order();
            order.erase(order.begin() + (v - 1));
            order.insert(order.begin(), designated);
            trace.states.push_back(Permutation::from_order(order));
        }
    }
    if (trace.total_on_instance > trace.total_on_singletons)
        throw std::logic_error("build_mtf_from_opt: instance cost exceeds singleton cost");
    trace.within_2x_opt = trace.total_on_instance <= 2 * opt.total;
    trace.within_4x_minus_3m =
        trace.total_on_instance <= 4 * opt.total - 3 * static_cast<Cost>(m);
    return trace;
}

EcOfflineTrace build_off_e_from_mtf(const MtfOfflineTrace& mtf, const Instance& instance) {
    const std::size_t m = instance.requests.size();
    if (mtf.states.size() != m + 1)
        throw std::invalid_argument("build_off_e_from_mtf: trace length mismatch");

    EcOfflineTrace trace;
    trace.states.push_back(canonic_partitioning(mtf.states[0]));
    bool first = true;
    for (std::size_t t = 1; t <= m; ++t) {
        trace.states.push_back(canonic_partitioning(mtf.states[t]));
        const Partitioning& prev = trace.states[t - 1];
        const Partitioning& next = trace.states[t];
        const Cost access = ec_access_cost(prev, instance.requests[t - 1]);
        const Cost movement = ec_opt_movement_cost(prev, next);
        trace.per_step.emplace_back(access, movement);
        trace.total += access + movement;

        const Cost mtf_step_cost = mtf.per_step[t - 1].first + mtf.per_step[t - 1].second;
        const Cost margin = 6 * mtf_step_cost - (access + movement);
        if (first || margin < trace.worst_step_margin) trace.worst_step_margin = margin;
        first = false;
        if (margin < 0) trace.within_6x_per_step = false;
    }
    return trace;
}

}  // namespace mssc
