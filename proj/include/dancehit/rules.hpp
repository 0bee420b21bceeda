#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dancehit/model.hpp"
#include "dancehit/rng.hpp"

namespace dancehit {

enum class RuleOp { Le, Ge };

struct RuleCondition {
    int feature = -1;
    RuleOp op = RuleOp::Le;
    double threshold = 0;

    bool matches(std::span<const double> row) const {
        double v = row[static_cast<std::size_t>(feature)];
        return op == RuleOp::Le ? v <= threshold : v >= threshold;
    }
};

// Conjunction of threshold conditions with a consequent class. An empty
// condition list matches everything (the default rule).
struct Rule {
    std::vector<RuleCondition> conditions;
    SongClass consequent = SongClass::Hit;
    double covered_hit = 0;     // training instances resolved by this rule
    double covered_nonhit = 0;

    bool matches(std::span<const double> row) const {
        for (const auto& c : conditions)
            if (!c.matches(row)) return false;
        return true;
    }
};

// Ordered ruleset; rules are evaluated top down and the first match wins.
// The final rule is unconditional.
class RuleSetModel final : public TrainedModel {
public:
    RuleSetModel() = default;
    RuleSetModel(std::vector<std::string> feature_names, std::vector<Rule> rules)
        : feature_names_(std::move(feature_names)), rules_(std::move(rules)) {
        if (rules_.empty() || !rules_.back().conditions.empty())
            throw std::invalid_argument("RuleSetModel: last rule must be unconditional");
    }

    std::string kind() const override { return "ripper"; }
    const std::vector<std::string>& feature_names() const override { return feature_names_; }

    const Rule& first_match(std::span<const double> row) const {
        check_width(row);
        for (const auto& r : rules_)
            if (r.matches(row)) return r;
        return rules_.back();
    }

    SongClass classify(std::span<const double> row) const override {
        return first_match(row).consequent;
    }

    // Laplace-smoothed hit rate of the deciding rule's training coverage.
    double score_hit(std::span<const double> row) const override {
        const Rule& r = first_match(row);
        return (r.covered_hit + 1.0) / (r.covered_hit + r.covered_nonhit + 2.0);
    }

    const std::vector<Rule>& rules() const { return rules_; }

    nlohmann::json to_json() const override {
        auto j = detail::model_envelope(kind(), feature_names_);
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rules_) {
            nlohmann::json conds = nlohmann::json::array();
            for (const auto& c : r.conditions)
                conds.push_back(nlohmann::json{{"feature", c.feature},
                                               {"op", c.op == RuleOp::Le ? "<=" : ">="},
                                               {"threshold", c.threshold}});
            arr.push_back(nlohmann::json{{"conditions", conds},
                                         {"consequent", to_string(r.consequent)},
                                         {"covered_hit", r.covered_hit},
                                         {"covered_nonhit", r.covered_nonhit}});
        }
        j["rules"] = arr;
        return j;
    }

    static RuleSetModel from_json(const nlohmann::json& j) {
        detail::check_envelope(j, "ripper");
        std::vector<Rule> rules;
        for (const auto& rj : j.at("rules")) {
            Rule r;
            for (const auto& cj : rj.at("conditions")) {
                RuleCondition c;
                c.feature = cj.at("feature").get<int>();
                c.op = cj.at("op").get<std::string>() == "<=" ? RuleOp::Le : RuleOp::Ge;
                c.threshold = cj.at("threshold").get<double>();
                r.conditions.push_back(c);
            }
            r.consequent = rj.at("consequent").get<std::string>() == "Hit" ? SongClass::Hit
                                                                           : SongClass::NonHit;
            r.covered_hit = rj.at("covered_hit").get<double>();
            r.covered_nonhit = rj.at("covered_nonhit").get<double>();
            rules.push_back(std::move(r));
        }
        return RuleSetModel(j.at("feature_names").get<std::vector<std::string>>(),
                            std::move(rules));
    }

private:
    std::vector<std::string> feature_names_;
    std::vector<Rule> rules_;
};

struct RipperParams {
    int folds = 3;          // grow on (folds-1)/folds, prune on 1/folds
    int min_weight = 2;     // minimal instances a grown rule must keep covering
    int optimize_runs = 2;  // replacement/revision passes
    std::uint64_t seed = 1;
};

namespace detail {

inline double log2_choose(double n, double k) {
    if (k < 0 || k > n) return 0;
    return (std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1)) /
           std::numbers::ln2;
}

struct RipperContext {
    const Dataset& ds;
    SongClass target;            // minority class rules are learned for
    SongClass default_class;
    double possible_conditions;  // coding universe size for theory bits
    const RipperParams& params;
};

inline bool is_positive(const RipperContext& ctx, std::size_t i) {
    return ctx.ds.labels[i] == ctx.target;
}

inline bool rule_matches(const RipperContext& ctx, const Rule& r, std::size_t i) {
    return r.matches(ctx.ds.rows[i]);
}

// Theory cost of one rule: count of conditions plus a subset code over the
// condition universe, halved per the usual redundancy factor.
inline double rule_dl(const RipperContext& ctx, const Rule& r) {
    auto k = static_cast<double>(r.conditions.size());
    if (k == 0) return 0;
    return 0.5 * (std::log2(k + 1) + log2_choose(ctx.possible_conditions, k));
}

// Exception cost of the ruleset (without default rule) on the full data:
// binomial codes for the false positives among covered instances and the
// false negatives among uncovered ones.
inline double exception_dl(const RipperContext& ctx, const std::vector<Rule>& rules) {
    double covered = 0, fp = 0, uncovered = 0, fn = 0;
    for (std::size_t i = 0; i < ctx.ds.n_rows(); ++i) {
        bool match = false;
        for (const auto& r : rules)
            if (rule_matches(ctx, r, i)) {
                match = true;
                break;
            }
        if (match) {
            covered += 1;
            if (!is_positive(ctx, i)) fp += 1;
        } else {
            uncovered += 1;
            if (is_positive(ctx, i)) fn += 1;
        }
    }
    return std::log2(covered + 1) + log2_choose(covered, fp) +
           std::log2(uncovered + 1) + log2_choose(uncovered, fn);
}

inline double total_dl(const RipperContext& ctx, const std::vector<Rule>& rules) {
    double dl = exception_dl(ctx, rules);
    for (const auto& r : rules) dl += rule_dl(ctx, r);
    return dl;
}

struct Coverage {
    double pos = 0, neg = 0;
};

inline Coverage coverage_of(const RipperContext& ctx, const Rule& r,
                            std::span<const std::size_t> idx) {
    Coverage c;
    for (std::size_t i : idx)
        if (rule_matches(ctx, r, i)) (is_positive(ctx, i) ? c.pos : c.neg) += 1;
    return c;
}

// Greedy FOIL-gain growth: keep adding the single best threshold condition
// until no negatives are covered or nothing improves.
inline void grow_rule(const RipperContext& ctx, Rule& rule,
                      std::vector<std::size_t> covered) {
    while (true) {
        double p_old = 0, n_old = 0;
        for (std::size_t i : covered) (is_positive(ctx, i) ? p_old : n_old) += 1;
        if (n_old == 0 || p_old == 0) return;
        double base = std::log2(p_old / (p_old + n_old));

        double best_gain = 0;
        RuleCondition best_cond;
        bool found = false;

        std::vector<std::pair<double, bool>> vals(covered.size());
        for (std::size_t f = 0; f < ctx.ds.n_features(); ++f) {
            for (std::size_t v = 0; v < covered.size(); ++v)
                vals[v] = {ctx.ds.rows[covered[v]][f], is_positive(ctx, covered[v])};
            std::sort(vals.begin(), vals.end());

            // prefix (<= v) and suffix (>= v) coverage at each distinct value
            double pp = 0, pn = 0;
            for (std::size_t v = 0; v < vals.size(); ++v) {
                (vals[v].second ? pp : pn) += 1;
                if (v + 1 < vals.size() && vals[v + 1].first == vals[v].first) continue;
                double candidates[2][3] = {
                    {pp, pn, 0},                      // <= value
                    {p_old - pp, n_old - pn, 1},      // >  value, expressed as >= next
                };
                for (const auto& cand : candidates) {
                    double p_new = cand[0], n_new = cand[1];
                    if (p_new < 1) continue;
                    if (p_new + n_new < ctx.params.min_weight) continue;
                    double gain = p_new * (std::log2(p_new / (p_new + n_new)) - base);
                    if (gain > best_gain + 1e-12) {
                        best_gain = gain;
                        best_cond.feature = static_cast<int>(f);
                        if (cand[2] == 0) {
                            best_cond.op = RuleOp::Le;
                            best_cond.threshold = vals[v].first;
                        } else {
                            best_cond.op = RuleOp::Ge;
                            best_cond.threshold = vals[v + 1].first;
                        }
                        found = true;
                    }
                }
            }
        }
        if (!found) return;
        rule.conditions.push_back(best_cond);
        std::vector<std::size_t> next;
        for (std::size_t i : covered)
            if (best_cond.matches(ctx.ds.rows[i])) next.push_back(i);
        covered = std::move(next);
    }
}

// Keeps the condition prefix maximizing (p - n) / (p + n) on the prune set.
inline void prune_rule(const RipperContext& ctx, Rule& rule,
                       std::span<const std::size_t> prune_idx) {
    if (rule.conditions.empty()) return;
    double best_metric = -2;
    std::size_t best_len = rule.conditions.size();
    for (std::size_t len = 1; len <= rule.conditions.size(); ++len) {
        Rule prefix;
        prefix.conditions.assign(rule.conditions.begin(),
                                 rule.conditions.begin() + static_cast<long>(len));
        Coverage c = coverage_of(ctx, prefix, prune_idx);
        if (c.pos + c.neg == 0) continue;
        double metric = (c.pos - c.neg) / (c.pos + c.neg);
        if (metric > best_metric + 1e-12) {
            best_metric = metric;
            best_len = len;
        }
    }
    rule.conditions.resize(best_len);
}

// Stratified split of the remaining instances into grow and prune parts.
inline void grow_prune_split(const RipperContext& ctx, std::span<const std::size_t> idx,
                             Rng& rng, std::vector<std::size_t>& grow,
                             std::vector<std::size_t>& prune) {
    grow.clear();
    prune.clear();
    for (bool positive : {true, false}) {
        std::vector<std::size_t> members;
        for (std::size_t i : idx)
            if (is_positive(ctx, i) == positive) members.push_back(i);
        rng.shuffle(members);
        std::size_t n_prune = members.size() / static_cast<std::size_t>(ctx.params.folds);
        for (std::size_t m = 0; m < members.size(); ++m)
            (m < n_prune ? prune : grow).push_back(members[m]);
    }
    std::sort(grow.begin(), grow.end());
    std::sort(prune.begin(), prune.end());
}

// Grows and prunes one candidate rule on a fresh split of `idx`.
inline Rule make_candidate(const RipperContext& ctx, std::span<const std::size_t> idx,
                           Rng& rng, const Rule* seed_rule) {
    std::vector<std::size_t> grow_idx, prune_idx;
    grow_prune_split(ctx, idx, rng, grow_idx, prune_idx);

    Rule rule;
    rule.consequent = ctx.target;
    std::vector<std::size_t> covered = grow_idx;
    if (seed_rule) {
        rule.conditions = seed_rule->conditions;
        std::vector<std::size_t> kept;
        for (std::size_t i : covered)
            if (rule.matches(ctx.ds.rows[i])) kept.push_back(i);
        covered = std::move(kept);
    }
    grow_rule(ctx, rule, std::move(covered));
    prune_rule(ctx, rule, prune_idx);

    // Reject rules whose prune-set error exceeds 50%.
    Coverage c = coverage_of(ctx, rule, prune_idx);
    if (c.pos + c.neg > 0 && c.neg > c.pos) rule.conditions.clear();
    return rule;
}

}  // namespace detail

// Sequential covering for the minority class with grow/prune splits,
// MDL-based stopping, optimization passes, and a majority default rule.
inline RuleSetModel ripper_fit(const Dataset& train, const RipperParams& params = {}) {
    const std::size_t n_hit = train.count(SongClass::Hit);
    const std::size_t n_nonhit = train.count(SongClass::NonHit);
    if (n_hit == 0 || n_nonhit == 0)
        throw std::invalid_argument("ripper_fit: both classes required");
    if (params.folds < 2) throw std::invalid_argument("ripper_fit: folds >= 2");

    detail::RipperContext ctx{
        .ds = train,
        .target = n_hit < n_nonhit ? SongClass::Hit : SongClass::NonHit,
        .default_class = n_hit < n_nonhit ? SongClass::NonHit : SongClass::Hit,
        .possible_conditions =
            2.0 * static_cast<double>(train.n_features()) *
            static_cast<double>(train.n_rows()),
        .params = params,
    };
    Rng root(params.seed);

    auto remaining_after = [&](const std::vector<Rule>& rules) {
        std::vector<std::size_t> rest;
        for (std::size_t i = 0; i < train.n_rows(); ++i) {
            bool covered = false;
            for (const auto& r : rules)
                if (detail::rule_matches(ctx, r, i)) {
                    covered = true;
                    break;
                }
            if (!covered) rest.push_back(i);
        }
        return rest;
    };
    auto count_pos = [&](std::span<const std::size_t> idx) {
        std::size_t c = 0;
        for (std::size_t i : idx)
            if (detail::is_positive(ctx, i)) ++c;
        return c;
    };

    // Description length may rise at most this much past the best seen
    // before rule construction stops.
    constexpr double kDlSlack = 64.0;

    std::vector<Rule> rules;
    auto cover_loop = [&](int pass) {
        double min_dl = detail::total_dl(ctx, rules);
        int rule_no = 0;
        while (true) {
            auto rest = remaining_after(rules);
            if (count_pos(rest) == 0) break;
            Rng rng = root.derive("grow", static_cast<std::uint64_t>(pass),
                                  static_cast<std::uint64_t>(rule_no++));
            Rule rule = detail::make_candidate(ctx, rest, rng, nullptr);
            if (rule.conditions.empty()) break;
            rules.push_back(rule);
            double dl = detail::total_dl(ctx, rules);
            if (dl > min_dl + kDlSlack) {
                rules.pop_back();
                break;
            }
            min_dl = std::min(min_dl, dl);
        }
    };
    cover_loop(0);

    // Optimization: try replacement (grown from scratch) and revision
    // (extended from the current rule) variants; keep whichever version of
    // the ruleset has the lowest description length.
    for (int run = 0; run < params.optimize_runs; ++run) {
        for (std::size_t r = 0; r < rules.size(); ++r) {
            std::vector<Rule> others;
            for (std::size_t o = 0; o < rules.size(); ++o)
                if (o != r) others.push_back(rules[o]);
            auto idx = remaining_after(others);
            if (count_pos(idx) == 0) continue;

            Rng rng = root.derive("optimize", static_cast<std::uint64_t>(run),
                                  static_cast<std::uint64_t>(r));
            Rule replacement = detail::make_candidate(ctx, idx, rng, nullptr);
            Rule revision = detail::make_candidate(ctx, idx, rng, &rules[r]);

            double best = detail::total_dl(ctx, rules);
            for (const Rule& cand : {replacement, revision}) {
                if (cand.conditions.empty()) continue;
                std::vector<Rule> variant = rules;
                variant[r] = cand;
                double dl = detail::total_dl(ctx, variant);
                if (dl < best) {
                    best = dl;
                    rules = std::move(variant);
                }
            }
        }
        cover_loop(run + 1);
    }

    // Cleanup: drop rules whose removal lowers the description length.
    for (std::size_t r = rules.size(); r-- > 0;) {
        std::vector<Rule> without;
        for (std::size_t o = 0; o < rules.size(); ++o)
            if (o != r) without.push_back(rules[o]);
        if (detail::total_dl(ctx, without) < detail::total_dl(ctx, rules))
            rules = std::move(without);
    }

    // Default rule plus per-rule training coverage for ranking scores.
    Rule default_rule;
    default_rule.consequent = ctx.default_class;
    rules.push_back(default_rule);
    for (std::size_t i = 0; i < train.n_rows(); ++i) {
        for (auto& r : rules)
            if (detail::rule_matches(ctx, r, i)) {
                (train.labels[i] == SongClass::Hit ? r.covered_hit : r.covered_nonhit) += 1;
                break;
            }
    }
    return RuleSetModel(train.feature_names, std::move(rules));
}

}  // namespace dancehit
