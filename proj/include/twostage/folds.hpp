#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "twostage/rng.hpp"

namespace twostage {

struct FoldPlan {
    std::size_t k_folds = 0;
    std::vector<std::size_t> fold_assignment;

    std::vector<std::size_t> test_indices(std::size_t fold) const;
    std::vector<std::size_t> train_indices(std::size_t fold) const;
    std::vector<std::size_t> fold_sizes() const;

    bool operator==(const FoldPlan&) const = default;
};

/// Random permutation of 0..n-1 dealt round-robin into k_folds folds.
FoldPlan make_folds(std::size_t n, std::size_t k_folds, RngSeed seed);

std::string fold_plan_to_json(const FoldPlan& plan);
FoldPlan fold_plan_from_json(const std::string& text);

}  // namespace twostage
