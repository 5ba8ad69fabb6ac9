#include "polx/coupling.hpp"

#include "polx/error.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace polx {

namespace c = constants;

std::vector<std::string> PhysicalInputs::validate() const {
    const std::pair<const char*, double> fields[] = {{"omega1", omega1}, {"omega2", omega2}, {"n_e", n_e},
                                                     {"rho", rho},       {"I1", I1},         {"I2", I2}};
    for (const auto& [name, v] : fields)
        if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(std::string("physical input ") + name + " must be finite and >= 0");
    std::vector<std::string> warnings;
    for (double w : {omega1, omega2})
        if (w > 10.0)
            warnings.push_back("photon energy " + std::to_string(w) + " eV exceeds 10 eV; dipole approximation is doubtful");
    return warnings;
}

double hydrogen_R(double omega_eV, double n_e_cm3) {
    if (!(omega_eV > 0.0)) throw ConfigError("hydrogen_R requires omega > 0");
    if (n_e_cm3 < 0.0) throw ConfigError("hydrogen_R requires n_e >= 0");
    const double e2 = 4.0 * c::pi * c::alpha;
    const double hc3 = c::hbar_c_eV_cm * c::hbar_c_eV_cm * c::hbar_c_eV_cm;
    const double n_e_nat = n_e_cm3 * hc3;  // eV^3
    const double me2 = c::electron_mass_eV * c::electron_mass_eV;
    const double ry5 = std::pow(c::rydberg_eV, 5);
    const double r_nat = 2529.0 * c::pi * c::pi * e2 * e2 * omega_eV * omega_eV * n_e_nat / (8.0 * me2 * ry5);  // eV^-2
    return r_nat * hc3;
}

double exchange_length(const PhysicalInputs& in) {
    in.validate();
    if (!(in.omega1 > 0 && in.omega2 > 0 && in.rho > 0 && in.I1 > 0 && in.I2 > 0))
        throw ConfigError("exchange_length requires positive photon energies, density and intensities");
    return 1.8e-7 * std::sqrt(in.omega1 * in.omega2) * in.rho * std::sqrt(in.I1 * in.I2);
}

double photon_density(double intensity_W_cm2, double omega_eV) {
    if (!(omega_eV > 0.0)) throw ConfigError("photon_density requires omega > 0");
    return intensity_W_cm2 / (omega_eV * c::electron_volt_J * c::speed_of_light_cm_s);
}

CouplingConstants hydrogen_coupling(const PhysicalInputs& in, double volume_cm3) {
    in.validate();
    if (!(volume_cm3 > 0.0)) throw ConfigError("quantization volume must be positive");
    const double omega = std::sqrt(in.omega1 * in.omega2);
    const double n_e = in.n_e > 0.0 ? in.n_e : in.rho / c::hydrogen_mass_g;
    const double r = hydrogen_R(omega, n_e);
    const double n1 = photon_density(in.I1, in.omega1);
    const double n2 = photon_density(in.I2, in.omega2);
    const double n_gamma = std::sqrt(n1 * n2);
    return CouplingConstants{r, r / volume_cm3, n1, n2, n_gamma * r / c::hbar_c_eV_cm};
}

SpMat kron(const SpMat& a, const SpMat& b) {
    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(static_cast<std::size_t>(a.nonZeros() * b.nonZeros()));
    for (Eigen::Index ra = 0; ra < a.outerSize(); ++ra)
        for (SpMat::InnerIterator ia(a, ra); ia; ++ia)
            for (Eigen::Index rb = 0; rb < b.outerSize(); ++rb)
                for (SpMat::InnerIterator ib(b, rb); ib; ++ib)
                    trip.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(),
                                      ia.value() * ib.value());
    SpMat out(a.rows() * b.rows(), a.cols() * b.cols());
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

double TwoBeamHamiltonian::time_scale() const { return 1.0 / std::sqrt(double(n_a.photons()) * n_b.photons()); }
double MTotalBlock::time_scale() const { return 1.0 / std::sqrt(double(n_a.photons()) * n_b.photons()); }

TwoBeamHamiltonian build_hamiltonian(Basis basis, double theta, BeamSize n_a, BeamSize n_b, double g) {
    if (!(theta >= 0.0 && theta <= c::pi)) throw ConfigError("theta must lie in [0, pi]");
    if (!(g >= 0.0) || !std::isfinite(g)) throw ConfigError("coupling g must be finite and >= 0");
    const InteractionTerms t = interaction_terms(basis, theta);

    const SpMat ka = collective_op(n_a, t.axis).matrix;
    const SpMat kb = collective_op(n_b, t.axis).matrix;
    const SpMat s1a = collective_op(n_a, CollectiveKind::S1).matrix;
    const SpMat s1b = collective_op(n_b, CollectiveKind::S1).matrix;
    const SpMat ia = collective_op(n_a, CollectiveKind::Identity).matrix;
    const SpMat ib = collective_op(n_b, CollectiveKind::Identity).matrix;

    SpMat h = cplx(t.single * n_b.photons()) * kron(ka, ib) + cplx(t.single * n_a.photons()) * kron(ia, kb);
    h += cplx(t.cross) * kron(s1a, s1b);
    h += cplx(t.diag) * kron(ka, kb);
    h *= cplx(g);
    h.prune(cplx(0.0));
    h.makeCompressed();

    const bool conserves = basis == Basis::Circular && theta == 0.0;
    return TwoBeamHamiltonian{basis, theta, n_a, n_b, g, std::move(h), conserves};
}

int MTotalBlock::find(int k_a, int k_b) const {
    for (std::size_t i = 0; i < index_map.size(); ++i)
        if (index_map[i].first == k_a && index_map[i].second == k_b) return static_cast<int>(i);
    return -1;
}

MTotalBlock block_restrict(const TwoBeamHamiltonian& h, double total_m) {
    if (!h.conserves_total_m)
        throw ConfigError("block_restrict requires a Hamiltonian that conserves S3 + T3 (circular basis, theta = 0)");
    MTotalBlock block{total_m, {}, SpMat(), h.n_a, h.n_b, h.g};
    std::vector<int> position(static_cast<std::size_t>(h.dim()), -1);
    for (int ka = 0; ka < h.n_a.dim(); ++ka) {
        const double mb = total_m - h.n_a.m_of(ka);
        const double kb = mb + h.n_b.spin();
        if (std::abs(kb - std::round(kb)) > 1e-9 || kb < -0.5 || kb > h.n_b.photons() + 0.5) continue;
        const int kbi = static_cast<int>(std::lround(kb));
        position[static_cast<std::size_t>(ka) * h.n_b.dim() + kbi] = static_cast<int>(block.index_map.size());
        block.index_map.emplace_back(ka, kbi);
    }
    if (block.index_map.empty()) throw ConfigError("total_m = " + std::to_string(total_m) + " has no states");

    std::vector<Eigen::Triplet<cplx>> trip;
    for (std::size_t i = 0; i < block.index_map.size(); ++i) {
        const auto [ka, kb] = block.index_map[i];
        const Eigen::Index row = static_cast<Eigen::Index>(ka) * h.n_b.dim() + kb;
        for (SpMat::InnerIterator it(h.matrix, row); it; ++it) {
            const int col = position[static_cast<std::size_t>(it.col())];
            if (col < 0) throw NumericalError("Hamiltonian couples total_m sectors; block restriction invalid");
            trip.emplace_back(static_cast<Eigen::Index>(i), col, it.value());
        }
    }
    const auto n = static_cast<Eigen::Index>(block.index_map.size());
    block.matrix.resize(n, n);
    block.matrix.setFromTriplets(trip.begin(), trip.end());
    block.matrix.makeCompressed();
    return block;
}

MTotalBlock circular_block(BeamSize n_a, BeamSize n_b, double total_m, double g) {
    if (!(g >= 0.0) || !std::isfinite(g)) throw ConfigError("coupling g must be finite and >= 0");
    MTotalBlock block{total_m, {}, SpMat(), n_a, n_b, g};
    for (int ka = 0; ka < n_a.dim(); ++ka) {
        const double kb = total_m - n_a.m_of(ka) + n_b.spin();
        if (std::abs(kb - std::round(kb)) > 1e-9 || kb < -0.5 || kb > n_b.photons() + 0.5) continue;
        block.index_map.emplace_back(ka, static_cast<int>(std::lround(kb)));
    }
    if (block.index_map.empty()) throw ConfigError("total_m = " + std::to_string(total_m) + " has no states");

    auto ladder = [](BeamSize n, int k) {
        const double j = n.spin(), m = n.m_of(k);
        return std::sqrt((j - m) * (j + m + 1.0));
    };
    std::vector<Eigen::Triplet<cplx>> trip;
    for (std::size_t i = 0; i + 1 < block.index_map.size(); ++i) {
        const auto [ka, kb] = block.index_map[i];
        // S+ T- maps (ka, kb) to (ka + 1, kb - 1), the next block state.
        const double v = 4.0 * g * ladder(n_a, ka) * ladder(n_b, kb - 1);
        if (v == 0.0) continue;
        trip.emplace_back(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i), cplx(v));
        trip.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1), cplx(v));
    }
    const auto n = static_cast<Eigen::Index>(block.index_map.size());
    block.matrix.resize(n, n);
    block.matrix.setFromTriplets(trip.begin(), trip.end());
    block.matrix.makeCompressed();
    return block;
}

SpMat total_s3(BeamSize n_a, BeamSize n_b) {
    return kron(collective_op(n_a, CollectiveKind::S3).matrix, collective_op(n_b, CollectiveKind::Identity).matrix) +
           kron(collective_op(n_a, CollectiveKind::Identity).matrix, collective_op(n_b, CollectiveKind::S3).matrix);
}

double hermiticity_defect(const SpMat& m) {
    const SpMat d = m - SpMat(m.adjoint());
    double worst = 0.0;
    for (Eigen::Index r = 0; r < d.outerSize(); ++r)
        for (SpMat::InnerIterator it(d, r); it; ++it) worst = std::max(worst, std::abs(it.value()));
    return worst;
}

void write_triplets(std::ostream& os, const SpMat& m) {
    os << "# " << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
    os << std::setprecision(17);
    for (Eigen::Index r = 0; r < m.outerSize(); ++r)
        for (SpMat::InnerIterator it(m, r); it; ++it)
            os << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' ' << it.value().imag() << '\n';
}

SpMat read_triplets(std::istream& is) {
    std::string hash;
    Eigen::Index rows = 0, cols = 0, nnz = 0;
    if (!(is >> hash >> rows >> cols >> nnz) || hash != "#") throw ConfigError("triplet file: missing '# rows cols nnz' header");
    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(static_cast<std::size_t>(nnz));
    for (Eigen::Index i = 0; i < nnz; ++i) {
        Eigen::Index r, c;
        double re, im;
        if (!(is >> r >> c >> re >> im)) throw ConfigError("triplet file: truncated at entry " + std::to_string(i));
        trip.emplace_back(r, c, cplx(re, im));
    }
    SpMat m(rows, cols);
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

void write_constants_table(std::ostream& os) {
    os << std::setprecision(15);
    os << "name,value,unit,source\n";
    os << "alpha," << c::alpha << ",1,CODATA 2022\n";
    os << "hbar_c," << c::hbar_c_eV_cm << ",eV cm,CODATA 2022\n";
    os << "electron_mass," << c::electron_mass_eV << ",eV,CODATA 2022\n";
    os << "rydberg," << c::rydberg_eV << ",eV,CODATA 2022\n";
    os << "hydrogen_atom_mass," << c::hydrogen_mass_g << ",g,CODATA 2022 (m_p + m_e)\n";
    os << "electron_volt," << c::electron_volt_J << ",J,exact\n";
    os << "speed_of_light," << c::speed_of_light_cm_s << ",cm/s,exact\n";
    os << "exchange_prefactor,1.8e-7,cm^-1,scaling law at unit bracket ratios\n";
}

}  // namespace polx
