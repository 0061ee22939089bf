#include "locus/finite_ring.hpp"

#include <numeric>

#include "locus/error.hpp"

namespace locus {

namespace {

constexpr int kMaxRingSize = 4096;

std::vector<int> poly_mulmod(const std::vector<int>& a, const std::vector<int>& b,
                             const std::vector<int>& modulus, int p) {
    // modulus is monic of degree k, coefficients low to high
    const std::size_t k = modulus.size() - 1;
    std::vector<int> prod(2 * k, 0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
    for (std::size_t d = prod.size(); d-- > k;) {
        int c = prod[d];
        if (c == 0) continue;
        for (std::size_t i = 0; i <= k; ++i) {
            std::size_t idx = d - k + i;
            prod[idx] = ((prod[idx] - c * modulus[i]) % p + p) % p;
        }
    }
    prod.resize(k);
    return prod;
}

bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

}  // namespace

FiniteRing::FiniteRing(int n, int one, std::vector<std::uint16_t> add, std::vector<std::uint16_t> mul,
                       nlohmann::json source, std::string name)
    : n_(n), one_(one), add_(std::move(add)), mul_(std::move(mul)), source_(std::move(source)),
      name_(std::move(name)) {
    if (n_ < 1 || n_ > kMaxRingSize) throw InvalidParameter("ring size out of range");
    const auto nn = static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
    if (add_.size() != nn || mul_.size() != nn) throw InvalidParameter("ring table has wrong size");
    if (one_ < 0 || one_ >= n_) throw InvalidParameter("ring unit out of range");
    for (auto v : add_)
        if (v >= n_) throw InvalidParameter("ring addition table entry out of range");
    for (auto v : mul_)
        if (v >= n_) throw InvalidParameter("ring multiplication table entry out of range");
    neg_.assign(static_cast<std::size_t>(n_), -1);
    inv_.assign(static_cast<std::size_t>(n_), -1);
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b) {
            if (this->add(a, b) == 0 && neg_[static_cast<std::size_t>(a)] < 0) neg_[static_cast<std::size_t>(a)] = b;
            if (this->mul(a, b) == one_ && inv_[static_cast<std::size_t>(a)] < 0) inv_[static_cast<std::size_t>(a)] = b;
        }
    for (int a = 0; a < n_; ++a)
        if (neg_[static_cast<std::size_t>(a)] < 0) throw InvalidParameter("ring element without additive inverse");
    int x = one_;
    char_ = 1;
    while (x != 0) {
        x = this->add(x, one_);
        ++char_;
        if (char_ > n_) throw InvalidParameter("index 0 is not the additive identity");
    }
}

int FiniteRing::from_integer(long long k) const {
    long long r = k % char_;
    if (r < 0) r += char_;
    int x = 0;
    for (long long i = 0; i < r; ++i) x = add(x, one_);
    return x;
}

bool FiniteRing::same_tables(const FiniteRing& other) const {
    return n_ == other.n_ && one_ == other.one_ && add_ == other.add_ && mul_ == other.mul_;
}

void FiniteRing::validate() const {
    for (int a = 0; a < n_; ++a) {
        if (add(0, a) != a) throw InvalidParameter("0 is not an additive identity");
        if (mul(one_, a) != a) throw InvalidParameter("1 is not a multiplicative identity");
        for (int b = 0; b < n_; ++b) {
            if (add(a, b) != add(b, a)) throw InvalidParameter("addition is not commutative");
            if (mul(a, b) != mul(b, a)) throw InvalidParameter("multiplication is not commutative");
            for (int c = 0; c < n_; ++c) {
                if (add(add(a, b), c) != add(a, add(b, c))) throw InvalidParameter("addition is not associative");
                if (mul(mul(a, b), c) != mul(a, mul(b, c)))
                    throw InvalidParameter("multiplication is not associative");
                if (mul(a, add(b, c)) != add(mul(a, b), mul(a, c)))
                    throw InvalidParameter("multiplication does not distribute");
            }
        }
    }
}

FiniteRing build_zmod(int n) {
    if (n < 1 || n > kMaxRingSize) throw InvalidParameter("zmod modulus must be in [1, 4096]");
    const auto nn = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    std::vector<std::uint16_t> add(nn), mul(nn);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            add[static_cast<std::size_t>(a * n + b)] = static_cast<std::uint16_t>((a + b) % n);
            mul[static_cast<std::size_t>(a * n + b)] = static_cast<std::uint16_t>((a * b) % n);
        }
    nlohmann::json src = {{"kind", "ring"}, {"backend", "zmod"}, {"n", n}};
    return FiniteRing(n, n == 1 ? 0 : 1, std::move(add), std::move(mul), std::move(src),
                      "Z/" + std::to_string(n));
}

FiniteRing build_gf(int q) {
    if (q < 2 || q > 64) throw InvalidParameter("gf order must be a prime power <= 64");
    int p = 0, k = 0;
    for (int d = 2; d <= q; ++d)
        if (q % d == 0) {
            p = d;
            break;
        }
    int rest = q;
    while (rest % p == 0) {
        rest /= p;
        ++k;
    }
    if (rest != 1 || !is_prime(p)) throw InvalidParameter("gf order must be a prime power <= 64");

    auto decode = [&](int idx) {
        std::vector<int> c(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            c[static_cast<std::size_t>(i)] = idx % p;
            idx /= p;
        }
        return c;
    };
    auto encode = [&](const std::vector<int>& c) {
        int idx = 0;
        for (int i = k; i-- > 0;) idx = idx * p + c[static_cast<std::size_t>(i)];
        return idx;
    };

    const auto nn = static_cast<std::size_t>(q) * static_cast<std::size_t>(q);
    std::vector<std::uint16_t> add(nn), mul(nn);
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b) {
            auto ca = decode(a), cb = decode(b);
            for (int i = 0; i < k; ++i)
                ca[static_cast<std::size_t>(i)] = (ca[static_cast<std::size_t>(i)] + cb[static_cast<std::size_t>(i)]) % p;
            add[static_cast<std::size_t>(a * q + b)] = static_cast<std::uint16_t>(encode(ca));
        }

    // Smallest monic modulus (in index order of its lower coefficients) giving a field.
    for (int low = 0; low < q; ++low) {
        std::vector<int> modulus = decode(low);
        modulus.push_back(1);
        for (int a = 0; a < q; ++a)
            for (int b = 0; b < q; ++b)
                mul[static_cast<std::size_t>(a * q + b)] =
                    static_cast<std::uint16_t>(encode(poly_mulmod(decode(a), decode(b), modulus, p)));
        bool field = true;
        for (int a = 1; a < q && field; ++a) {
            bool has_inverse = false;
            for (int b = 1; b < q; ++b)
                if (mul[static_cast<std::size_t>(a * q + b)] == 1) {
                    has_inverse = true;
                    break;
                }
            field = has_inverse;
        }
        if (field) {
            nlohmann::json src = {{"kind", "ring"}, {"backend", "gf"}, {"q", q}};
            return FiniteRing(q, 1, add, mul, std::move(src), "F" + std::to_string(q));
        }
    }
    throw InvalidParameter("no irreducible modulus found");
}

FiniteRing build_product(const std::vector<FiniteRing>& factors) {
    if (factors.empty()) throw InvalidParameter("product needs at least one factor");
    long long total = 1;
    for (const auto& f : factors) total *= f.size();
    if (total > kMaxRingSize) throw InvalidParameter("product ring too large");
    const int n = static_cast<int>(total);
    auto decode = [&](int idx) {
        std::vector<int> c(factors.size());
        for (std::size_t i = 0; i < factors.size(); ++i) {
            c[i] = idx % factors[i].size();
            idx /= factors[i].size();
        }
        return c;
    };
    auto encode = [&](const std::vector<int>& c) {
        int idx = 0;
        for (std::size_t i = factors.size(); i-- > 0;) idx = idx * factors[i].size() + c[i];
        return idx;
    };
    const auto nn = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    std::vector<std::uint16_t> add(nn), mul(nn);
    for (int a = 0; a < n; ++a) {
        auto ca = decode(a);
        for (int b = 0; b < n; ++b) {
            auto cb = decode(b);
            std::vector<int> s(factors.size()), m(factors.size());
            for (std::size_t i = 0; i < factors.size(); ++i) {
                s[i] = factors[i].add(ca[i], cb[i]);
                m[i] = factors[i].mul(ca[i], cb[i]);
            }
            add[static_cast<std::size_t>(a * n + b)] = static_cast<std::uint16_t>(encode(s));
            mul[static_cast<std::size_t>(a * n + b)] = static_cast<std::uint16_t>(encode(m));
        }
    }
    std::vector<int> ones;
    nlohmann::json fs = nlohmann::json::array();
    std::string name;
    for (const auto& f : factors) {
        ones.push_back(f.one());
        fs.push_back(f.source());
        name += (name.empty() ? "" : "x") + f.name();
    }
    nlohmann::json src = {{"kind", "ring"}, {"backend", "product"}, {"factors", fs}};
    return FiniteRing(n, encode(ones), std::move(add), std::move(mul), std::move(src), name);
}

FiniteRing build_table_ring(int n, int one, const std::vector<std::vector<int>>& add,
                            const std::vector<std::vector<int>>& mul) {
    if (n < 1 || n > kMaxRingSize) throw InvalidParameter("table ring size out of range");
    if (static_cast<int>(add.size()) != n || static_cast<int>(mul.size()) != n)
        throw InvalidParameter("table ring tables must be n x n");
    const auto nn = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    std::vector<std::uint16_t> a(nn), m(nn);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(add[static_cast<std::size_t>(i)].size()) != n ||
            static_cast<int>(mul[static_cast<std::size_t>(i)].size()) != n)
            throw InvalidParameter("table ring tables must be n x n");
        for (int j = 0; j < n; ++j) {
            int x = add[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            int y = mul[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (x < 0 || x >= n || y < 0 || y >= n) throw InvalidParameter("table entry out of range");
            a[static_cast<std::size_t>(i * n + j)] = static_cast<std::uint16_t>(x);
            m[static_cast<std::size_t>(i * n + j)] = static_cast<std::uint16_t>(y);
        }
    }
    nlohmann::json src = {{"kind", "ring"}, {"backend", "table"}, {"n", n}, {"one", one}, {"add", add}, {"mul", mul}};
    FiniteRing r(n, one, std::move(a), std::move(m), std::move(src), "ring[" + std::to_string(n) + "]");
    r.validate();
    return r;
}

nlohmann::json table_json(const FiniteRing& r) {
    std::vector<std::vector<int>> add(static_cast<std::size_t>(r.size()), std::vector<int>(static_cast<std::size_t>(r.size())));
    auto mul = add;
    for (int i = 0; i < r.size(); ++i)
        for (int j = 0; j < r.size(); ++j) {
            add[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = r.add(i, j);
            mul[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = r.mul(i, j);
        }
    return {{"kind", "ring"}, {"backend", "table"}, {"n", r.size()}, {"one", r.one()}, {"add", add}, {"mul", mul}};
}

}  // namespace locus
