#include "qreplica/approx.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <thread>
#include <unordered_map>

#include "qreplica/errors.hpp"

namespace qreplica {

GateSet::GateSet(std::vector<Operator> gates, std::vector<std::string> labels)
    : gates_(std::move(gates)), labels_(std::move(labels)) {
    if (gates_.empty()) {
        throw ContractError("gate set must contain at least one gate");
    }
    for (std::size_t l = 0; l < gates_.size(); ++l) {
        if (gates_[l].dim() != gates_.front().dim()) {
            throw ContractError("gate " + std::to_string(l) + " has a different dimension");
        }
        const std::string name = "gate " + std::to_string(l);
        require_unitary(gates_[l], name.c_str());
    }
    if (labels_.empty()) {
        for (std::size_t l = 0; l < gates_.size(); ++l) {
            labels_.push_back("g" + std::to_string(l));
        }
    }
    if (labels_.size() != gates_.size()) {
        throw ContractError("gate set needs one label per gate");
    }
}

Operator rotation_x(double angle) {
    const double c = std::cos(angle / 2);
    const double s = std::sin(angle / 2);
    return Operator{{c, Complex(0, -s)}, {Complex(0, -s), c}};
}

Operator rotation_y(double angle) {
    const double c = std::cos(angle / 2);
    const double s = std::sin(angle / 2);
    return Operator{{c, -s}, {s, c}};
}

Operator rotation_z(double angle) {
    return Operator{{std::polar(1.0, -angle / 2), 0.0}, {0.0, std::polar(1.0, angle / 2)}};
}

GateSet golden_rotation_gate_set() {
    const double angle = 2 * std::numbers::pi * std::numbers::phi;
    return GateSet({rotation_z(angle), rotation_x(angle)}, {"Rz(2pi*phi)", "Rx(2pi*phi)"});
}

Operator sequence_unitary(const Tape& sequence, const GateSet& gates) {
    if (sequence.alphabet_size() != gates.size()) {
        throw ContractError("sequence alphabet " + std::to_string(sequence.alphabet_size()) + " != gate count " +
                            std::to_string(gates.size()));
    }
    Operator product = Operator::identity(gates.dim());
    for (const Symbol k : sequence.cells()) {
        product = gates.gate(k) * product;
    }
    return product;
}

namespace {

struct Node {
    Operator product;
    std::vector<Symbol> cells;
    double distance;
};

// Grid over phase-invariant features |U00|^2 and U00 * conj(U11). If
// d(A, B) <= r then some phase aligns A and B to Frobenius distance
// delta = r * sqrt(2m), which moves each feature by at most 2 delta + delta^2.
// With that as the cell width every near neighbour sits in an adjacent cell.
class ProductNet {
public:
    ProductNet(double radius, std::size_t dim)
        : radius_(radius), dim_(dim) {
        const double delta = radius * std::sqrt(2.0 * static_cast<double>(dim));
        cell_ = 2 * delta + delta * delta + 1e-12;
    }

    /// Inserts `op` unless an existing point lies within the radius.
    bool insert(const Operator& op) {
        const auto key = key_of(op);
        if (radius_ > 0) {
            for (std::int64_t a = -1; a <= 1; ++a) {
                for (std::int64_t b = -1; b <= 1; ++b) {
                    for (std::int64_t c = -1; c <= 1; ++c) {
                        const auto it = cells_.find(Key{key[0] + a, key[1] + b, key[2] + c});
                        if (it == cells_.end()) {
                            continue;
                        }
                        for (const std::size_t idx : it->second) {
                            const double d = unchecked_phase_distance(points_[idx], op);
                            if (d <= radius_) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        cells_[key].push_back(points_.size());
        points_.push_back(op);
        return true;
    }

private:
    using Key = std::array<std::int64_t, 3>;
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept {
            std::uint64_t h = 1469598103934665603ull;
            for (const auto v : k) {
                h = (h ^ static_cast<std::uint64_t>(v)) * 1099511628211ull;
            }
            return static_cast<std::size_t>(h);
        }
    };

    Key key_of(const Operator& op) const {
        const Complex u00 = op(0, 0);
        const Complex cross = dim_ > 1 ? u00 * std::conj(op(1, 1)) : Complex{};
        return Key{static_cast<std::int64_t>(std::floor(std::norm(u00) / cell_)),
                   static_cast<std::int64_t>(std::floor(cross.real() / cell_)),
                   static_cast<std::int64_t>(std::floor(cross.imag() / cell_))};
    }

    double radius_;
    std::size_t dim_;
    double cell_;
    std::vector<Operator> points_;
    std::unordered_map<Key, std::vector<std::size_t>, KeyHash> cells_;
};

std::vector<Node> expand(const std::vector<Node>& frontier, const GateSet& gates, const Operator& target,
                         bool parallel) {
    const std::size_t n = gates.size();
    const std::size_t count = frontier.empty() ? n : frontier.size() * n;
    std::vector<std::optional<Node>> slots(count);

    auto build = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const Symbol l = static_cast<Symbol>(i % n);
            if (frontier.empty()) {
                Operator product = gates.gate(l);
                const double d = unchecked_phase_distance(target, product);
                slots[i].emplace(Node{std::move(product), {l}, d});
            } else {
                const Node& parent = frontier[i / n];
                Operator product = gates.gate(l) * parent.product;
                std::vector<Symbol> cells = parent.cells;
                cells.push_back(l);
                const double d = unchecked_phase_distance(target, product);
                slots[i].emplace(Node{std::move(product), std::move(cells), d});
            }
        }
    };

    const std::size_t workers = parallel ? std::max(1u, std::thread::hardware_concurrency()) : 1;
    if (workers <= 1 || count < 256) {
        build(0, count);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (count + workers - 1) / workers;
        for (std::size_t begin = 0; begin < count; begin += chunk) {
            pool.emplace_back(build, begin, std::min(count, begin + chunk));
        }
    }

    std::vector<Node> children;
    children.reserve(count);
    for (auto& slot : slots) {
        children.push_back(std::move(*slot));
    }
    return children;
}

// Distances closer than this count as ties.
constexpr double kTieWindow = 1e-12;

ApproxResult search(const Operator& target, const GateSet& gates, std::optional<double> epsilon, std::size_t max_len,
                    const SearchOptions& options) {
    require_unitary(target, "approximation target");
    if (target.dim() != gates.dim()) {
        throw ContractError("target dim " + std::to_string(target.dim()) + " != gate dim " +
                            std::to_string(gates.dim()));
    }
    if (max_len == 0) {
        throw ContractError("max_len must be at least 1");
    }
    if (!(options.net_radius >= 0.0)) {
        throw ContractError("net radius must be non-negative");
    }

    ProductNet net(options.net_radius, gates.dim());
    std::vector<Node> frontier;
    std::optional<Node> best;
    std::size_t expansions = 0;

    for (std::size_t level = 1; level <= max_len; ++level) {
        std::vector<Node> children = expand(frontier, gates, target, options.parallel);
        expansions += children.size();
        std::vector<Node> kept;
        for (auto& child : children) {
            if (!best || child.distance < best->distance - kTieWindow) {
                best = child;
            }
            if (net.insert(child.product)) {
                kept.push_back(std::move(child));
            }
        }
        frontier = std::move(kept);
        if (epsilon && best->distance <= *epsilon) {
            break;
        }
        if (frontier.empty()) {
            break;
        }
    }

    return ApproxResult{Tape(gates.size(), best->cells), best->distance, target, expansions};
}

}  // namespace

std::optional<ApproxResult> approximate(const Operator& target, const GateSet& gates, double epsilon,
                                        std::size_t max_len, const SearchOptions& options) {
    if (!(epsilon > 0.0)) {
        throw ContractError("epsilon must be positive");
    }
    ApproxResult result = search(target, gates, epsilon, max_len, options);
    if (result.achieved_distance > epsilon) {
        return std::nullopt;
    }
    return result;
}

ApproxResult best_approximation(const Operator& target, const GateSet& gates, std::size_t max_len,
                                const SearchOptions& options) {
    return search(target, gates, std::nullopt, max_len, options);
}

}  // namespace qreplica
