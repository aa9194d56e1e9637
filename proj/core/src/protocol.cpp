#include "scmra/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scmra/error.hpp"
#include "scmra/units.hpp"

namespace scmra {

namespace {

// Below this fraction of ||y|| the projected vector is rounding residue.
constexpr double kEmptySubspaceRelTol = 1e-12;

}  // namespace

ProtocolThresholds ProtocolThresholds::from_db(double gamma_dec_db, double gamma_drop_db, double gamma_delta_db,
                                               double tx_power_dbm, double scout_boost_db) {
    ProtocolThresholds t;
    t.gamma_dec = db_to_linear(gamma_dec_db);
    t.gamma_drop = db_to_linear(gamma_drop_db);
    t.gamma_delta = db_to_linear(gamma_delta_db);
    t.p_tx = dbm_to_watts(tx_power_dbm);
    t.p_scout = t.p_tx * db_to_linear(scout_boost_db);
    return t;
}

void validate(const ProtocolThresholds& thr) {
    if (!(thr.gamma_drop > 0.0)) throw Error("thresholds: gamma_drop must be > 0");
    if (!(thr.gamma_dec > thr.gamma_drop)) throw Error("thresholds: gamma_dec must exceed gamma_drop");
    if (!(thr.gamma_delta > 1.0)) throw Error("thresholds: gamma_delta must exceed 0 dB");
    if (!(thr.p_tx > 0.0) || !(thr.p_scout > 0.0)) throw Error("thresholds: powers must be > 0");
}

// --- SharedDatabase ---------------------------------------------------------

SharedDatabase::SharedDatabase(Eigen::Index dimension) : dimension_(dimension) {
    if (dimension < 2) throw Error("shared database: dimension must be >= 2");
}

bool SharedDatabase::contains(TaskId id) const {
    return std::find(task_ids_.begin(), task_ids_.end(), id) != task_ids_.end();
}

const ComplexVector& SharedDatabase::vector_for(TaskId id) const {
    const auto it = std::find(task_ids_.begin(), task_ids_.end(), id);
    if (it == task_ids_.end()) throw Error("shared database: unknown task id " + std::to_string(id));
    return vectors_[static_cast<std::size_t>(it - task_ids_.begin())];
}

const ComplexVector& SharedDatabase::add(const ComplexVector& b, TaskId id) {
    if (b.size() != dimension_) throw Error("shared database: dimension mismatch");
    if (size() >= capacity()) throw Error("subspace exhausted");
    if (contains(id)) throw Error("shared database: duplicate task id " + std::to_string(id));
    vectors_.push_back(gram_schmidt_extend(vectors_, b));
    task_ids_.push_back(id);
    return vectors_.back();
}

void SharedDatabase::remove(TaskId id) {
    const auto it = std::find(task_ids_.begin(), task_ids_.end(), id);
    if (it == task_ids_.end()) throw Error("shared database: unknown task id " + std::to_string(id));
    const auto pos = it - task_ids_.begin();
    task_ids_.erase(it);
    vectors_.erase(vectors_.begin() + pos);
}

double SharedDatabase::max_cross_correlation() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < vectors_.size(); ++i) {
        for (std::size_t j = i + 1; j < vectors_.size(); ++j) {
            worst = std::max(worst, std::abs(vectors_[i].dot(vectors_[j])));
        }
    }
    return worst;
}

SharedDatabase db_add(SharedDatabase db, const ComplexVector& b, TaskId id) {
    db.add(b, id);
    return db;
}

SharedDatabase db_remove(SharedDatabase db, TaskId id) {
    db.remove(id);
    return db;
}

// --- per-symbol operations ----------------------------------------------------

ComplexVector compose_transmit(const ScoutingState& scout, std::span<const CommTaskState> tasks,
                               const ProtocolThresholds& thr) {
    ComplexVector x = std::sqrt(thr.p_scout) * scout.x0;
    const double amp = std::sqrt(thr.p_tx);
    for (const auto& t : tasks) x += amp * t.b;
    return x;
}

ComplexVector orthogonalize(const ComplexVector& y, const SharedDatabase& db) {
    ComplexVector out = y;
    for (const auto& b : db.vectors()) out -= b * b.dot(y);
    return out;
}

ScoutingUpdate scouting_update(const ScoutingState& scout, const ComplexVector& y, const SharedDatabase& db,
                               double sigma_sq) {
    // x0[k] = P_B^perp y^*[k] / ||.||; second pass restores orthogonality lost to rounding.
    ComplexVector projected = orthogonalize(y.conjugate(), db);
    projected = orthogonalize(projected, db);
    const double norm = projected.norm();

    ScoutingUpdate out{scout, 0.0};
    if (norm == 0.0 || norm <= kEmptySubspaceRelTol * y.norm()) {
        out.state.gamma_prev = 0.0;
        return out;
    }
    out.state.x0 = projected / norm;
    out.gamma = norm * norm / sigma_sq;
    out.state.gamma_prev = out.gamma;
    return out;
}

bool detection_rule(double gamma, double gamma_prev, const ProtocolThresholds& thr) {
    if (!(gamma_prev > 0.0)) return false;
    return gamma > thr.gamma_dec && gamma / gamma_prev < thr.gamma_delta;
}

std::complex<double> comm_correlate(const ComplexVector& b, const ComplexVector& y) {
    return b.dot(y.conjugate());
}

std::uint8_t bpsk_demodulate(std::complex<double> u) { return u.real() >= 0.0 ? 0 : 1; }

bool drop_rule(std::complex<double> u, double sigma_sq, const ProtocolThresholds& thr) {
    return std::norm(u) / sigma_sq < thr.gamma_drop;
}

// --- BaseStation ----------------------------------------------------------------

BaseStation::BaseStation(Eigen::Index n, const ProtocolThresholds& thr, double sigma_sq, RandomStream rng)
    : thr_(thr), sigma_sq_(sigma_sq), rng_(rng), db_(n) {
    validate(thr_);
    if (!(sigma_sq_ > 0.0)) throw Error("base station: sigma_sq must be > 0");
    scout_.x0 = ComplexVector::Zero(n);
}

ComplexVector BaseStation::transmit() {
    if (scout_.needs_reinit) {
        scout_.x0 = random_unit_vector(rng_, db_.dimension(), db_.vectors());
        scout_.gamma_prev = 0.0;
        scout_.needs_reinit = false;
    }
    return compose_transmit(scout_, tasks_, thr_);
}

ReceiveResult BaseStation::receive(const ComplexVector& y, std::int64_t symbol) {
    if (y.size() != db_.dimension()) throw Error("base station: received vector dimension mismatch");
    ReceiveResult out;

    // Scouting Task, against the database that was in force during this interval.
    const double gamma_prev = scout_.gamma_prev;
    auto update = scouting_update(scout_, y, db_, sigma_sq_);
    scout_ = std::move(update.state);
    out.scout_gamma = update.gamma;
    if (update.gamma == 0.0) scout_.needs_reinit = true;  // nothing left to track in the null space

    // Communication Tasks that were transmitting during this interval.
    std::vector<CommTaskState> kept;
    kept.reserve(tasks_.size() + 1);
    for (auto& task : tasks_) {
        const auto u = comm_correlate(task.b, y);
        task.gamma = std::norm(u) / sigma_sq_;
        if (drop_rule(u, sigma_sq_, thr_)) {
            out.samples.push_back({task.id, u, task.gamma, -1});
            task.active = false;
            db_.remove(task.id);
            scout_.needs_reinit = true;
            out.retired.push_back(std::move(task));
            continue;
        }
        const auto bit = bpsk_demodulate(u);
        task.decoded_bits.push_back(bit);
        out.samples.push_back({task.id, u, task.gamma, bit});
        kept.push_back(std::move(task));
    }
    tasks_ = std::move(kept);

    if (detection_rule(update.gamma, gamma_prev, thr_)) {
        if (db_.size() >= db_.capacity()) {
            out.saturated = true;
        } else {
            CommTaskState task;
            task.id = next_id_++;
            task.b = db_.add(scout_.x0, task.id);
            task.start_symbol = symbol;
            task.first_bit_symbol = symbol + 1;
            // The detection symbol's phase is absorbed into b, so only its energy is reported.
            const auto u = comm_correlate(task.b, y);
            task.gamma = std::norm(u) / sigma_sq_;
            out.samples.push_back({task.id, u, task.gamma, -1});
            out.detected = task.id;
            tasks_.push_back(std::move(task));
            scout_.needs_reinit = true;
        }
    }
    return out;
}

std::vector<CommTaskState> BaseStation::terminate_all() {
    std::vector<CommTaskState> out = std::move(tasks_);
    tasks_.clear();
    for (auto& t : out) {
        t.active = false;
        db_.remove(t.id);
    }
    if (!out.empty()) scout_.needs_reinit = true;
    return out;
}

}  // namespace scmra
