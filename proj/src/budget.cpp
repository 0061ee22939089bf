#include "locus/budget.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace locus {

double env_budget_scale() {
    if (const char* env = std::getenv("LOCUS_BUDGET_SCALE")) {
        char* end = nullptr;
        double f = std::strtod(env, &end);
        if (end != env && f > 0) return f;
    }
    return 1.0;
}

namespace {

thread_local Budget current_budget = Budget{}.scaled(env_budget_scale());

std::size_t scale(std::size_t v, double f) {
    return static_cast<std::size_t>(std::max(1.0, std::floor(static_cast<double>(v) * f)));
}
}  // namespace

Budget Budget::scaled(double factor) const {
    Budget b = *this;
    b.hom_candidates = scale(hom_candidates, factor);
    b.morphism_candidates = scale(morphism_candidates, factor);
    b.monoid_normal_forms = scale(monoid_normal_forms, factor);
    return b;
}

const Budget& budget() { return current_budget; }

ScopedBudget::ScopedBudget(const Budget& b) : previous_(current_budget) { current_budget = b; }

ScopedBudget::~ScopedBudget() { current_budget = previous_; }

}  // namespace locus
