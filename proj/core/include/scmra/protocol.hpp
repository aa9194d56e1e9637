#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "scmra/linalg.hpp"
#include "scmra/random.hpp"
#include "scmra/scm.hpp"

namespace scmra {

using TaskId = std::int64_t;

/// Detection / drop thresholds and transmit powers, all linear (W for powers).
struct ProtocolThresholds {
    double gamma_dec = 1000.0;
    double gamma_drop = 3.1622776601683795;
    double gamma_delta = 3.1622776601683795;
    double p_tx = 3.1622776601683794e-4;
    double p_scout = 3.1622776601683794e-3;

    static ProtocolThresholds from_db(double gamma_dec_db, double gamma_drop_db, double gamma_delta_db,
                                      double tx_power_dbm, double scout_boost_db);
};

void validate(const ProtocolThresholds& thr);

/// Orthonormal beamformers of the packets currently being decoded. One dimension
/// is always left for scouting, so capacity is N - 1.
class SharedDatabase {
public:
    explicit SharedDatabase(Eigen::Index dimension);

    Eigen::Index dimension() const { return dimension_; }
    std::size_t size() const { return vectors_.size(); }
    bool empty() const { return vectors_.empty(); }
    std::size_t capacity() const { return static_cast<std::size_t>(dimension_ - 1); }

    std::span<const ComplexVector> vectors() const { return vectors_; }
    const std::vector<TaskId>& task_ids() const { return task_ids_; }
    bool contains(TaskId id) const;
    const ComplexVector& vector_for(TaskId id) const;

    /// Re-orthonormalizes `b` against the stored vectors and appends it.
    /// Returns the stored vector. Throws "subspace exhausted" at capacity.
    const ComplexVector& add(const ComplexVector& b, TaskId id);
    void remove(TaskId id);

    /// max_{i != j} |<b_i, b_j>|
    double max_cross_correlation() const;

private:
    Eigen::Index dimension_;
    std::vector<ComplexVector> vectors_;
    std::vector<TaskId> task_ids_;
};

SharedDatabase db_add(SharedDatabase db, const ComplexVector& b, TaskId id);
SharedDatabase db_remove(SharedDatabase db, TaskId id);

struct ScoutingState {
    ComplexVector x0;
    double gamma_prev = 0.0;
    bool needs_reinit = true;
};

struct CommTaskState {
    TaskId id = 0;
    ComplexVector b;
    Bits decoded_bits;
    std::int64_t start_symbol = 0;      // detection symbol
    std::int64_t first_bit_symbol = 0;  // symbol of decoded_bits[0]
    double gamma = 0.0;
    bool active = true;
};

/// sqrt(P_scout) x0 + sum_v sqrt(P_tx) b_v
ComplexVector compose_transmit(const ScoutingState& scout, std::span<const CommTaskState> tasks,
                               const ProtocolThresholds& thr);

/// (I - B B^H) y
ComplexVector orthogonalize(const ComplexVector& y, const SharedDatabase& db);

struct ScoutingUpdate {
    ScoutingState state;
    double gamma = 0.0;
};

/// One projected power-method step. The projection acts on conj(y), the domain
/// where the next beamformer lives, which keeps x0 orthogonal to the database.
ScoutingUpdate scouting_update(const ScoutingState& scout, const ComplexVector& y, const SharedDatabase& db,
                               double sigma_sq);

bool detection_rule(double gamma, double gamma_prev, const ProtocolThresholds& thr);

/// u = b^H y^*
std::complex<double> comm_correlate(const ComplexVector& b, const ComplexVector& y);

/// 0 if Re(u) >= 0, else 1.
std::uint8_t bpsk_demodulate(std::complex<double> u);

bool drop_rule(std::complex<double> u, double sigma_sq, const ProtocolThresholds& thr);

/// Per-task output of one receive step.
struct TaskSample {
    TaskId task = 0;
    std::complex<double> u;
    double gamma = 0.0;
    int bit = -1;  // -1 when no data decision was taken (detection symbol)
};

struct ReceiveResult {
    double scout_gamma = 0.0;
    std::optional<TaskId> detected;
    bool saturated = false;  // detection fired but the database was full
    std::vector<TaskSample> samples;
    std::vector<CommTaskState> retired;
};

/// Base-station engine: Scouting Task, Communication Tasks and the Shared Database.
/// Each symbol: transmit() composes x[k-1], then receive(y[k]) runs every task.
class BaseStation {
public:
    BaseStation(Eigen::Index n, const ProtocolThresholds& thr, double sigma_sq, RandomStream rng);

    ComplexVector transmit();
    ReceiveResult receive(const ComplexVector& y, std::int64_t symbol);

    /// Terminates every task (episode end); returns them.
    std::vector<CommTaskState> terminate_all();

    const SharedDatabase& database() const { return db_; }
    const ScoutingState& scouting() const { return scout_; }
    const std::vector<CommTaskState>& tasks() const { return tasks_; }
    const ProtocolThresholds& thresholds() const { return thr_; }
    double sigma_sq() const { return sigma_sq_; }
    Eigen::Index dimension() const { return db_.dimension(); }

private:
    ProtocolThresholds thr_;
    double sigma_sq_;
    RandomStream rng_;
    SharedDatabase db_;
    ScoutingState scout_;
    std::vector<CommTaskState> tasks_;
    TaskId next_id_ = 1;
};

}  // namespace scmra
