#include "qpw/session.hpp"

#include "qpw/error.hpp"

#include <fstream>
#include <random>
#include <sstream>

namespace qpw {

namespace {

std::int64_t now_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

std::string badge(const Quiver& q) {
    try {
        return classify(q).name();
    } catch (const Error& e) {
        switch (e.code()) {
        case ErrorCode::TwoCycle: return "undefined (2-cycle)";
        case ErrorCode::Disconnected: return "disconnected";
        case ErrorCode::BudgetExceeded: return "unknown (budget exceeded)";
        default: throw;
        }
    }
}

} // namespace

const char* mutation_mode_name(MutationMode m) { return m == MutationMode::Quiver ? "quiver" : "qp"; }

MutationMode parse_mutation_mode(const std::string& s) {
    if (s == "quiver") return MutationMode::Quiver;
    if (s == "qp") return MutationMode::QP;
    fail(ErrorCode::InvalidArgument, "mode must be \"quiver\" or \"qp\"");
}

QuiverWithPotential apply_op(const QuiverWithPotential& p, const SessionOp& op) {
    if (op.k < 0 || op.k >= p.quiver.size())
        fail(ErrorCode::OutOfRange, "vertex " + std::to_string(op.k + 1) + " out of range 1.." +
                                        std::to_string(p.quiver.size()));
    if (p.quiver.vertex_on_two_cycle(op.k))
        fail(ErrorCode::TwoCycle, "vertex " + std::to_string(op.k + 1) + " lies on a 2-cycle");
    if (op.mode == MutationMode::QP) return qp_mutate(p, op.k);
    return {mutate(p.quiver, op.k), Potential(p.potential.truncation())};
}

Session::Session(std::string id, QuiverWithPotential initial) : id_(std::move(id)) {
    states_.push_back(std::move(initial));
    created_ = touched_ = now_ms();
}

void Session::touch() { touched_ = std::max(now_ms(), touched_); }

void Session::mutate(const SessionOp& op) {
    QuiverWithPotential next = apply_op(current(), op);
    ops_.resize(cursor_);
    states_.resize(cursor_ + 1);
    ops_.push_back(op);
    states_.push_back(std::move(next));
    ++cursor_;
    touch();
}

void Session::undo() {
    if (!can_undo()) fail(ErrorCode::Domain, "nothing to undo");
    --cursor_;
    touch();
}

void Session::redo() {
    if (!can_redo()) fail(ErrorCode::Domain, "nothing to redo");
    ++cursor_;
    touch();
}

QuiverWithPotential Session::replay() const {
    QuiverWithPotential p = initial();
    for (std::size_t i = 0; i < cursor_; ++i) p = apply_op(p, ops_[i]);
    return p;
}

io::json Session::view() const {
    io::json j;
    j["id"] = id_;
    j["qp"] = io::qp_to_json(current());
    j["badge"] = badge(current().quiver);
    io::json on_cycle = io::json::array();
    for (int v = 0; v < current().quiver.size(); ++v)
        if (current().quiver.vertex_on_two_cycle(v)) on_cycle.push_back(v + 1);
    j["twoCycles"] = {{"present", current().quiver.has_two_cycle()}, {"vertices", std::move(on_cycle)}};
    io::json hist = io::json::array();
    for (const auto& op : ops_) hist.push_back({{"k", op.k + 1}, {"mode", mutation_mode_name(op.mode)}});
    j["history"] = std::move(hist);
    j["cursor"] = cursor_;
    j["canUndo"] = can_undo();
    j["canRedo"] = can_redo();
    j["createdAt"] = created_;
    j["touchedAt"] = touched_;
    return j;
}

io::json Session::to_state() const {
    io::json j;
    j["id"] = id_;
    j["initial"] = io::qp_to_json(initial());
    io::json hist = io::json::array();
    for (const auto& op : ops_) hist.push_back({{"k", op.k + 1}, {"mode", mutation_mode_name(op.mode)}});
    j["history"] = std::move(hist);
    j["cursor"] = cursor_;
    j["createdAt"] = created_;
    j["touchedAt"] = touched_;
    return j;
}

std::unique_ptr<Session> Session::from_state(const io::json& j) {
    try {
        auto s = std::make_unique<Session>(j.at("id").get<std::string>(), io::qp_from_json(j.at("initial")));
        for (const auto& h : j.at("history")) {
            s->mutate({parse_mutation_mode(h.at("mode").get<std::string>()), h.at("k").get<int>() - 1});
        }
        const auto cursor = j.at("cursor").get<std::size_t>();
        if (cursor > s->ops_.size()) fail(ErrorCode::InvalidArgument, "session cursor out of range");
        s->cursor_ = cursor;
        s->created_ = j.at("createdAt").get<std::int64_t>();
        s->touched_ = j.at("touchedAt").get<std::int64_t>();
        return s;
    } catch (const io::json::exception& e) {
        fail(ErrorCode::InvalidArgument, std::string("malformed session state: ") + e.what());
    }
}

SessionStore::SessionStore(std::optional<std::filesystem::path> state_dir) : dir_(std::move(state_dir)) {
    if (!dir_) return;
    std::filesystem::create_directories(*dir_);
    for (const auto& entry : std::filesystem::directory_iterator(*dir_)) {
        if (entry.path().extension() != ".json") continue;
        std::ifstream in(entry.path());
        std::stringstream ss;
        ss << in.rdbuf();
        auto s = Session::from_state(io::parse(ss.str()));
        const std::string id = s->id();
        sessions_[id] = std::move(s);
    }
}

std::string SessionStore::fresh_id() {
    static thread_local std::mt19937_64 rng(std::random_device{}());
    static const char* hex = "0123456789abcdef";
    while (true) {
        std::string id;
        auto x = rng();
        for (int i = 0; i < 16; ++i, x >>= 4) id.push_back(hex[x & 15]);
        if (!sessions_.contains(id)) return id;
    }
}

std::shared_ptr<Session> SessionStore::find(const std::string& id) const {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) fail(ErrorCode::NotFound, "unknown session " + id);
    return it->second;
}

void SessionStore::persist(const Session& s) const {
    if (!dir_) return;
    const auto path = *dir_ / (s.id() + ".json");
    const auto tmp = *dir_ / (s.id() + ".json.tmp");
    {
        std::ofstream out(tmp);
        out << io::dump(s.to_state());
        if (!out) fail(ErrorCode::Internal, "cannot write session state to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

io::json SessionStore::create(const QuiverWithPotential& initial) {
    std::shared_ptr<Session> s;
    {
        std::lock_guard lock(mutex_);
        s = std::make_shared<Session>(fresh_id(), initial);
        sessions_[s->id()] = s;
    }
    std::lock_guard lock(s->mutex());
    persist(*s);
    return s->view();
}

io::json SessionStore::get(const std::string& id) const {
    return with_session(id, [](const Session& s) { return s.view(); });
}

io::json SessionStore::mutate(const std::string& id, const SessionOp& op) {
    auto s = find(id);
    std::lock_guard lock(s->mutex());
    s->mutate(op);
    persist(*s);
    return s->view();
}

io::json SessionStore::undo(const std::string& id) {
    auto s = find(id);
    std::lock_guard lock(s->mutex());
    s->undo();
    persist(*s);
    return s->view();
}

io::json SessionStore::redo(const std::string& id) {
    auto s = find(id);
    std::lock_guard lock(s->mutex());
    s->redo();
    persist(*s);
    return s->view();
}

std::size_t SessionStore::size() const {
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

} // namespace qpw
