#include "twostage/folds.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace twostage {

FoldPlan make_folds(std::size_t n, std::size_t k_folds, RngSeed seed) {
    if (k_folds == 0 || k_folds > n) {
        throw std::invalid_argument("make_folds: need 1 <= k_folds <= n");
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng.engine());

    FoldPlan plan;
    plan.k_folds = k_folds;
    plan.fold_assignment.assign(n, 0);
    for (std::size_t pos = 0; pos < n; ++pos) plan.fold_assignment[perm[pos]] = pos % k_folds;
    return plan;
}

std::vector<std::size_t> FoldPlan::test_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_assignment.size(); ++i) {
        if (fold_assignment[i] == fold) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_assignment.size(); ++i) {
        if (fold_assignment[i] != fold) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> FoldPlan::fold_sizes() const {
    std::vector<std::size_t> sizes(k_folds, 0);
    for (auto f : fold_assignment) ++sizes.at(f);
    return sizes;
}

std::string fold_plan_to_json(const FoldPlan& plan) {
    nlohmann::json j;
    j["k_folds"] = plan.k_folds;
    j["fold_assignment"] = plan.fold_assignment;
    return j.dump();
}

FoldPlan fold_plan_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    FoldPlan plan;
    plan.k_folds = j.at("k_folds").get<std::size_t>();
    plan.fold_assignment = j.at("fold_assignment").get<std::vector<std::size_t>>();
    for (auto f : plan.fold_assignment) {
        if (f >= plan.k_folds) throw std::invalid_argument("fold index out of range");
    }
    return plan;
}

}  // namespace twostage
