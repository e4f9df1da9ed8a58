#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace bfim {

enum class Pauli { X, Y, Z };

char pauli_char(Pauli p);
Pauli pauli_from_char(char c);

// One weighted Pauli string. Site indices are 1-based; the identity string is
// the empty factor map.
struct PauliString {
    double coefficient = 0.0;
    std::map<int, Pauli> factors;

    bool is_identity() const { return factors.empty(); }
    bool operator==(const PauliString&) const = default;
};

// Hermitian observable: real-weighted Pauli strings over a fixed-length chain
// plus a constant offset. Terms with identical factor maps are merged on
// insertion and exact-zero coefficients are dropped, so term counts are
// deterministic. Immutable in spirit: build it, then share freely.
class Observable {
public:
    explicit Observable(int length, double constant_offset = 0.0);

    int length() const { return length_; }
    double constant_offset() const { return offset_; }
    const std::vector<PauliString>& terms() const { return terms_; }

    // Merges with any existing term over the same factor map; drops the term
    // if the merged coefficient is exactly zero. Site indices outside
    // [1, length] are rejected.
    void add_term(double coefficient, const std::map<int, Pauli>& factors);
    void set_constant_offset(double offset) { offset_ = offset; }

    // Sum of another observable into this one. Lengths must match.
    Observable& operator+=(const Observable& other);

    // Sum of |coefficient| over terms; bounds |<O>| together with the offset.
    double coefficient_one_norm() const;

    nlohmann::json to_json() const;
    static Observable from_json(const nlohmann::json& j);

private:
    int length_;
    double offset_;
    std::vector<PauliString> terms_;
};

} // namespace bfim
