#include "bfim/observable.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace bfim {

char pauli_char(Pauli p) {
    switch (p) {
        case Pauli::X: return 'X';
        case Pauli::Y: return 'Y';
        case Pauli::Z: return 'Z';
    }
    throw std::invalid_argument("unknown Pauli kind");
}

Pauli pauli_from_char(char c) {
    switch (c) {
        case 'X': return Pauli::X;
        case 'Y': return Pauli::Y;
        case 'Z': return Pauli::Z;
    }
    throw std::invalid_argument(std::string("unknown Pauli character '") + c + "'");
}

Observable::Observable(int length, double constant_offset)
    : length_(length), offset_(constant_offset) {
    if (length < 1)
        throw std::invalid_argument("Observable length must be at least 1");
}

void Observable::add_term(double coefficient, const std::map<int, Pauli>& factors) {
    for (const auto& [site, _] : factors) {
        if (site < 1 || site > length_)
            throw std::invalid_argument("Pauli factor site " + std::to_string(site) +
                                        " outside [1, " + std::to_string(length_) + "]");
    }
    auto it = std::find_if(terms_.begin(), terms_.end(),
                           [&](const PauliString& t) { return t.factors == factors; });
    if (it != terms_.end()) {
        it->coefficient += coefficient;
        if (it->coefficient == 0.0)
            terms_.erase(it);
        return;
    }
    if (coefficient == 0.0)
        return;
    terms_.push_back(PauliString{coefficient, factors});
}

Observable& Observable::operator+=(const Observable& other) {
    if (other.length_ != length_)
        throw std::invalid_argument("cannot combine observables of different lengths");
    offset_ += other.offset_;
    for (const auto& t : other.terms_)
        add_term(t.coefficient, t.factors);
    return *this;
}

double Observable::coefficient_one_norm() const {
    double s = 0.0;
    for (const auto& t : terms_)
        s += std::abs(t.coefficient);
    return s;
}

nlohmann::json Observable::to_json() const {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : terms_) {
        nlohmann::json factors = nlohmann::json::array();
        for (const auto& [site, p] : t.factors)
            factors.push_back({site, std::string(1, pauli_char(p))});
        terms.push_back({{"coefficient", t.coefficient}, {"factors", factors}});
    }
    return {{"length", length_}, {"constant_offset", offset_}, {"terms", terms}};
}

Observable Observable::from_json(const nlohmann::json& j) {
    Observable obs(j.at("length").get<int>(), j.at("constant_offset").get<double>());
    for (const auto& t : j.at("terms")) {
        std::map<int, Pauli> factors;
        for (const auto& f : t.at("factors"))
            factors[f.at(0).get<int>()] = pauli_from_char(f.at(1).get<std::string>().at(0));
        obs.add_term(t.at("coefficient").get<double>(), factors);
    }
    return obs;
}

} // namespace bfim
