#pragma once

// Mutation sessions: a starting QP plus a history of vertex mutations with
// undo/redo. The current state is always the replay of the history prefix
// up to the cursor, and can be persisted as a JSON file per session.

#include "qpw/json_io.hpp"

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace qpw {

enum class MutationMode { Quiver, QP };
const char* mutation_mode_name(MutationMode m);
MutationMode parse_mutation_mode(const std::string& s);

struct SessionOp {
    MutationMode mode = MutationMode::QP;
    int k = 0; // 0-based
    friend bool operator==(const SessionOp&, const SessionOp&) = default;
};

/// Quiver mode mutates the underlying quiver only; the potential is reset to
/// zero because arrow ids are regenerated. QP mode runs qp_mutate. Both refuse
/// a vertex on a 2-cycle (TwoCycle).
QuiverWithPotential apply_op(const QuiverWithPotential& p, const SessionOp& op);

class Session {
public:
    Session(std::string id, QuiverWithPotential initial);

    const std::string& id() const { return id_; }
    const QuiverWithPotential& initial() const { return states_.front(); }
    const QuiverWithPotential& current() const { return states_[cursor_]; }
    const std::vector<SessionOp>& history() const { return ops_; }
    std::size_t cursor() const { return cursor_; }
    bool can_undo() const { return cursor_ > 0; }
    bool can_redo() const { return cursor_ < ops_.size(); }

    void mutate(const SessionOp& op);
    /// Throws Domain when there is nothing to undo or redo.
    void undo();
    void redo();

    /// Recomputes the current state from the initial QP and the history.
    QuiverWithPotential replay() const;

    std::int64_t created_at() const { return created_; }
    std::int64_t touched_at() const { return touched_; }

    io::json view() const;
    io::json to_state() const;
    static std::unique_ptr<Session> from_state(const io::json& j);

    std::mutex& mutex() const { return mutex_; }

private:
    void touch();

    std::string id_;
    std::vector<SessionOp> ops_;
    std::vector<QuiverWithPotential> states_; // states_[i] = after ops_[0..i)
    std::size_t cursor_ = 0;
    std::int64_t created_ = 0;
    std::int64_t touched_ = 0;
    mutable std::mutex mutex_;
};

/// Thread-safe map of sessions. Each call locks the session it touches, so
/// mutations of one session are serialized while sessions stay independent.
class SessionStore {
public:
    explicit SessionStore(std::optional<std::filesystem::path> state_dir = std::nullopt);

    /// Returns the view of the new session.
    io::json create(const QuiverWithPotential& initial);
    io::json get(const std::string& id) const;
    io::json mutate(const std::string& id, const SessionOp& op);
    io::json undo(const std::string& id);
    io::json redo(const std::string& id);
    std::size_t size() const;

    /// Runs `fn` on the session under its lock.
    template <class Fn>
    auto with_session(const std::string& id, Fn&& fn) const {
        auto s = find(id);
        std::lock_guard lock(s->mutex());
        return fn(*s);
    }

private:
    std::shared_ptr<Session> find(const std::string& id) const;
    void persist(const Session& s) const;
    std::string fresh_id();

    std::optional<std::filesystem::path> dir_;
    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
};

} // namespace qpw
