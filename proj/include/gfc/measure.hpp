#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "gfc/errors.hpp"

namespace gfc {

// Nonnegative Borel measure on [0, inf) represented as a finite sum of atoms
// plus quadrature nodes discretizing an absolutely continuous part. Every
// integral against the measure becomes a finite sum.
class StieltjesMeasure {
public:
    struct Term {
        double location; // >= 0
        double mass;     // > 0
    };

    StieltjesMeasure(std::vector<Term> atoms, std::vector<Term> density_nodes = {})
        : atoms_(std::move(atoms)), density_nodes_(std::move(density_nodes)) {
        validate(atoms_, "atom");
        validate(density_nodes_, "density node");
        if (atoms_.empty() && density_nodes_.empty())
            throw input_error("StieltjesMeasure: measure must not be empty");
        terms_ = atoms_;
        terms_.insert(terms_.end(), density_nodes_.begin(), density_nodes_.end());
        harmonic_mass_ = 0.0;
        for (const Term& t : terms_) harmonic_mass_ += t.mass / (1.0 + t.location);
        if (!std::isfinite(harmonic_mass_))
            throw input_error("StieltjesMeasure: sum of mass/(1+location) overflows");
    }

    const std::vector<Term>& atoms() const { return atoms_; }
    const std::vector<Term>& density_nodes() const { return density_nodes_; }
    // Atoms and density nodes together; numerically they enter every sum alike.
    const std::vector<Term>& terms() const { return terms_; }
    double harmonic_mass() const { return harmonic_mass_; }

private:
    static void validate(const std::vector<Term>& v, const char* what) {
        for (const Term& t : v) {
            if (!(t.location >= 0.0) || !std::isfinite(t.location))
                throw input_error(std::string("StieltjesMeasure: ") + what +
                                  " location must be finite and >= 0");
            if (!(t.mass > 0.0) || !std::isfinite(t.mass))
                throw input_error(std::string("StieltjesMeasure: ") + what +
                                  " mass must be finite and > 0");
        }
    }

    std::vector<Term> atoms_;
    std::vector<Term> density_nodes_;
    std::vector<Term> terms_;
    double harmonic_mass_ = 0.0;
};

} // namespace gfc
