#pragma once

#include <cstddef>

namespace locus {

/// Enumeration limits. Exceeding any of them raises a *BudgetExceeded error
/// instead of silently truncating a search.
struct Budget {
    /// Candidate homomorphisms examined by a single hom-set enumeration.
    std::size_t hom_candidates = 100000;
    /// Candidate morphisms examined by a single space-morphism enumeration.
    std::size_t morphism_candidates = 1000000;
    /// Rewriting rules a monoid presentation may accumulate during completion.
    std::size_t monoid_normal_forms = 10000;
    /// Monoid homs are enumerated with generator images of total degree at most this.
    int monoid_hom_degree = 3;

    Budget scaled(double factor) const;
};

/// LOCUS_BUDGET_SCALE, or 1 when unset or malformed.
double env_budget_scale();

/// The budget in effect on the current thread.
const Budget& budget();

/// Installs a budget for the lifetime of the guard (restores the previous one).
class ScopedBudget {
public:
    explicit ScopedBudget(const Budget& b);
    ~ScopedBudget();
    ScopedBudget(const ScopedBudget&) = delete;
    ScopedBudget& operator=(const ScopedBudget&) = delete;

private:
    Budget previous_;
};

}  // namespace locus
