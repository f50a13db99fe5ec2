#include "qpw/qpw.h"

#include "qpw/error.hpp"
#include "qpw/json_io.hpp"
#include "qpw/session.hpp"

#include <cstdlib>
#include <cstring>
#include <new>

struct qpw_qp {
    qpw::QuiverWithPotential value;
};

struct qpw_session_store {
    explicit qpw_session_store(std::optional<std::filesystem::path> dir) : store(std::move(dir)) {}
    qpw::SessionStore store;
};

namespace {

using qpw::Error;
using qpw::ErrorCode;
namespace io = qpw::io;

thread_local std::string last_error;

char* copy_out(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

qpw_status set_error(qpw_status code, const std::string& msg) {
    last_error = msg;
    return code;
}

// Runs fn, translating exceptions into status codes and the thread's message.
template <class Fn>
qpw_status guard(Fn&& fn) {
    try {
        last_error.clear();
        fn();
        return QPW_OK;
    } catch (const Error& e) {
        return set_error(static_cast<qpw_status>(static_cast<int>(e.code())), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(QPW_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return set_error(QPW_INTERNAL, e.what());
    }
}

void require_ptr(const void* p, const char* what) {
    if (!p) qpw::fail(ErrorCode::InvalidArgument, std::string(what) + " must not be null");
}

io::json parse_doc(const char* text, const char* what) {
    require_ptr(text, what);
    return io::parse(text);
}

int to_index(int k, int n) {
    if (k < 1 || k > n)
        qpw::fail(ErrorCode::OutOfRange,
                  "vertex " + std::to_string(k) + " out of range 1.." + std::to_string(n));
    return k - 1;
}

std::vector<int> int_vector(const int* v, size_t len, const char* what) {
    if (len > 0) require_ptr(v, what);
    return std::vector<int>(v, v + len);
}

void emit(char** out, const io::json& j) {
    require_ptr(out, "out");
    *out = copy_out(io::dump(j));
}

qpw::TruncatedAlgebra finite_algebra(const qpw::QuiverWithPotential& p) {
    qpw::TruncatedAlgebra a = qpw::truncated_quotient(p, p.potential.truncation());
    if (!a.certificate().finite())
        qpw::fail(ErrorCode::Domain, "Jacobian algebra is " + a.certificate().name() + "; finite dimension is required");
    return a;
}

} // namespace

extern "C" {

const char* qpw_version(void) { return io::kToolVersion; }

const char* qpw_status_name(qpw_status status) {
    if (status == QPW_OK) return "ok";
    return qpw::error_code_name(static_cast<ErrorCode>(static_cast<int>(status)));
}

const char* qpw_last_error(void) { return last_error.c_str(); }

void qpw_string_free(char* s) { std::free(s); }

qpw_status qpw_qp_parse(const char* qp_json, qpw_qp** out) {
    return guard([&] {
        require_ptr(out, "out");
        auto p = io::qp_from_json(parse_doc(qp_json, "qp_json"));
        *out = new qpw_qp{std::move(p)};
    });
}

void qpw_qp_free(qpw_qp* qp) { delete qp; }

qpw_status qpw_qp_to_json(const qpw_qp* qp, char** out) {
    return guard([&] {
        require_ptr(qp, "qp");
        emit(out, io::qp_to_json(qp->value));
    });
}

int qpw_qp_vertex_count(const qpw_qp* qp) { return qp ? qp->value.quiver.size() : 0; }

qpw_status qpw_qp_mutate(const qpw_qp* qp, int k, qpw_qp** out) {
    return guard([&] {
        require_ptr(qp, "qp");
        require_ptr(out, "out");
        auto p = qpw::qp_mutate(qp->value, to_index(k, qp->value.quiver.size()));
        *out = new qpw_qp{std::move(p)};
    });
}

qpw_status qpw_mutate_json(const char* quiver_json, int k, char** out) {
    return guard([&] {
        const qpw::Quiver q = io::quiver_from_json(parse_doc(quiver_json, "quiver_json"));
        emit(out, io::quiver_to_json(qpw::mutate(q, to_index(k, q.size()))));
    });
}

qpw_status qpw_classify_json(const char* quiver_json, char** out) {
    return guard([&] {
        const qpw::Quiver q = io::quiver_from_json(parse_doc(quiver_json, "quiver_json"));
        emit(out, io::classification_to_json(qpw::classify(q)));
    });
}

qpw_status qpw_qp_mutate_json(const char* qp_json, int k, char** out) {
    return guard([&] {
        const auto p = io::qp_from_json(parse_doc(qp_json, "qp_json"));
        emit(out, io::qp_to_json(qpw::qp_mutate(p, to_index(k, p.quiver.size()))));
    });
}

qpw_status qpw_jacobian_json(const char* qp_json, int truncation, char** out) {
    return guard([&] {
        const auto p = io::qp_from_json(parse_doc(qp_json, "qp_json"));
        const int n = truncation > 0 ? truncation : p.potential.truncation();
        emit(out, io::jacobian_to_json(qpw::truncated_quotient(p, n)));
    });
}

qpw_status qpw_stable_json(const char* rep_json, const char* qp_json, const int* theta, size_t theta_len,
                           char** out) {
    return guard([&] {
        const auto m = io::rep_from_json(parse_doc(rep_json, "rep_json"));
        const auto p = io::qp_from_json(parse_doc(qp_json, "qp_json"));
        const auto t = int_vector(theta, theta_len, "theta");
        emit(out, io::stability_to_json(io::stability_report(p, m, t), t));
    });
}

qpw_status qpw_einv_json(const char* qp_json, const int* g, size_t g_len, int samples, uint64_t seed, char** out) {
    return guard([&] {
        const auto p = io::qp_from_json(parse_doc(qp_json, "qp_json"));
        const auto gv = int_vector(g, g_len, "g");
        if (static_cast<int>(gv.size()) != p.quiver.size())
            qpw::fail(ErrorCode::InvalidArgument, "g has the wrong length");
        if (samples < 1) qpw::fail(ErrorCode::InvalidArgument, "samples must be positive");
        const auto a = finite_algebra(p);
        emit(out, io::probe_to_json(qpw::rigid_tame_probe(a, gv, samples, seed), gv));
    });
}

void qpw_witness_options_init(qpw_witness_options* options) {
    if (!options) return;
    const qpw::WitnessOptions d;
    options->k = d.k;
    options->probe_depth = d.probe_depth;
    options->probe_trials = d.probe_trials;
    options->seed = d.seed;
    options->progress = nullptr;
    options->user = nullptr;
}

qpw_status qpw_witness_json(const char* qp_json, const qpw_witness_options* options, char** out) {
    return guard([&] {
        const auto p = io::qp_from_json(parse_doc(qp_json, "qp_json"));
        qpw::WitnessOptions o;
        if (options) {
            o.k = options->k;
            o.probe_depth = options->probe_depth;
            o.probe_trials = options->probe_trials;
            o.seed = options->seed;
            if (options->progress) {
                auto fn = options->progress;
                void* user = options->user;
                o.progress = [fn, user](const std::string& line) { fn(line.c_str(), user); };
            }
        }
        emit(out, io::certificate_to_json(qpw::run_witness(p, o)));
    });
}

qpw_status qpw_session_store_open(const char* state_dir, qpw_session_store** out) {
    return guard([&] {
        require_ptr(out, "out");
        std::optional<std::filesystem::path> dir;
        if (state_dir && *state_dir) dir = state_dir;
        *out = new qpw_session_store(dir);
    });
}

void qpw_session_store_close(qpw_session_store* store) { delete store; }

qpw_status qpw_session_create(qpw_session_store* store, const char* qp_json, char** out) {
    return guard([&] {
        require_ptr(store, "store");
        emit(out, store->store.create(io::qp_from_json(parse_doc(qp_json, "qp_json"))));
    });
}

qpw_status qpw_session_get(qpw_session_store* store, const char* id, char** out) {
    return guard([&] {
        require_ptr(store, "store");
        require_ptr(id, "id");
        emit(out, store->store.get(id));
    });
}

qpw_status qpw_session_mutate(qpw_session_store* store, const char* id, int k, const char* mode, char** out) {
    return guard([&] {
        require_ptr(store, "store");
        require_ptr(id, "id");
        require_ptr(mode, "mode");
        const auto m = qpw::parse_mutation_mode(mode);
        const int n = store->store.with_session(id, [](const qpw::Session& s) { return s.current().quiver.size(); });
        emit(out, store->store.mutate(id, {m, to_index(k, n)}));
    });
}

qpw_status qpw_session_undo(qpw_session_store* store, const char* id, char** out) {
    return guard([&] {
        require_ptr(store, "store");
        require_ptr(id, "id");
        emit(out, store->store.undo(id));
    });
}

qpw_status qpw_session_redo(qpw_session_store* store, const char* id, char** out) {
    return guard([&] {
        require_ptr(store, "store");
        require_ptr(id, "id");
        emit(out, store->store.redo(id));
    });
}

} // extern "C"
