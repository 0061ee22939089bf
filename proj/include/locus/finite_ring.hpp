#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace locus {

/// A finite commutative ring with materialized addition and multiplication
/// tables. Elements are the indices 0..size()-1 and index 0 is always zero.
class FiniteRing {
public:
    FiniteRing(int n, int one, std::vector<std::uint16_t> add, std::vector<std::uint16_t> mul,
               nlohmann::json source, std::string name);

    int size() const { return n_; }
    int zero() const { return 0; }
    int one() const { return one_; }
    int add(int a, int b) const { return add_[static_cast<std::size_t>(a * n_ + b)]; }
    int mul(int a, int b) const { return mul_[static_cast<std::size_t>(a * n_ + b)]; }
    int neg(int a) const { return neg_[static_cast<std::size_t>(a)]; }
    int sub(int a, int b) const { return add(a, neg(b)); }
    /// Multiplicative inverse, or -1 if `a` is not a unit.
    int inverse(int a) const { return inv_[static_cast<std::size_t>(a)]; }
    bool is_unit(int a) const { return inverse(a) >= 0; }
    bool is_zero_ring() const { return n_ == 1; }
    /// Image of the integer k under Z -> R.
    int from_integer(long long k) const;
    /// Additive order of 1.
    int characteristic() const { return char_; }

    /// Description this ring serializes to; null for derived rings, which
    /// serialize as tables.
    const nlohmann::json& source() const { return source_; }
    const std::string& name() const { return name_; }

    bool same_tables(const FiniteRing& other) const;

    /// Checks the commutative ring axioms on the full tables.
    void validate() const;

private:
    int n_;
    int one_;
    int char_ = 0;
    std::vector<std::uint16_t> add_;
    std::vector<std::uint16_t> mul_;
    std::vector<int> neg_;
    std::vector<int> inv_;
    nlohmann::json source_;
    std::string name_;
};

FiniteRing build_zmod(int n);
/// Galois field with q = p^k <= 64 elements.
FiniteRing build_gf(int q);
FiniteRing build_product(const std::vector<FiniteRing>& factors);
/// Ring from explicit tables. Index 0 must be the additive identity; the ring
/// axioms are checked by exhaustion.
FiniteRing build_table_ring(int n, int one, const std::vector<std::vector<int>>& add,
                            const std::vector<std::vector<int>>& mul);

/// Table-form json for any finite ring.
nlohmann::json table_json(const FiniteRing& r);

}  // namespace locus
