#include "statarb/statarb.h"

#include <cstring>
#include <sstream>
#include <string>

#include "statarb/errors.hpp"
#include "statarb/pipeline.hpp"

struct sa_config {
    statarb::RunConfig impl;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
sa_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return SA_OK;
    } catch (const statarb::Error& e) {
        g_last_error = e.what();
        return static_cast<sa_status>(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SA_E_INTERNAL;
    }
}

char* copy_report(const std::string& text) {
    char* out = new char[text.size() + 1];
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

template <typename Cmd>
sa_status run_with_report(const sa_config_t* config, char** report, Cmd&& cmd) {
    if (!config) {
        g_last_error = "null config handle";
        return SA_E_CONFIG;
    }
    return guarded([&] {
        std::ostringstream text;
        cmd(config->impl, text);
        if (report) *report = copy_report(text.str());
    });
}

}  // namespace

extern "C" {

const char* sa_version(void) { return "statarb 1.0.0"; }

const char* sa_last_error(void) { return g_last_error.c_str(); }

sa_status sa_config_create(sa_config_t** out) {
    if (!out) {
        g_last_error = "null output pointer";
        return SA_E_CONFIG;
    }
    return guarded([&] { *out = new sa_config(); });
}

void sa_config_free(sa_config_t* config) { delete config; }

sa_status sa_config_load_file(sa_config_t* config, const char* path) {
    if (!config || !path) {
        g_last_error = "null argument";
        return SA_E_CONFIG;
    }
    return guarded([&] { config->impl.load_file(path); });
}

sa_status sa_config_apply_env(sa_config_t* config) {
    if (!config) {
        g_last_error = "null config handle";
        return SA_E_CONFIG;
    }
    return guarded([&] { config->impl.apply_env(); });
}

sa_status sa_config_set(sa_config_t* config, const char* key, const char* value) {
    if (!config || !key || !value) {
        g_last_error = "null argument";
        return SA_E_CONFIG;
    }
    return guarded([&] { config->impl.set(key, value); });
}

sa_status sa_config_get(const sa_config_t* config, const char* key, char* buffer,
                        size_t capacity) {
    if (!config || !key || !buffer || capacity == 0) {
        g_last_error = "null argument";
        return SA_E_CONFIG;
    }
    return guarded([&] {
        const std::string& value = config->impl.get(key);
        if (value.size() + 1 > capacity)
            statarb::raise(statarb::ErrorCode::ConfigError, "buffer too small for " + std::string(key));
        std::memcpy(buffer, value.c_str(), value.size() + 1);
    });
}

sa_status sa_config_hash(const sa_config_t* config, uint64_t* out) {
    if (!config || !out) {
        g_last_error = "null argument";
        return SA_E_CONFIG;
    }
    return guarded([&] { *out = config->impl.config_hash(); });
}

sa_status sa_cmd_synth(const sa_config_t* config) {
    if (!config) {
        g_last_error = "null config handle";
        return SA_E_CONFIG;
    }
    return guarded([&] { statarb::cmd_synth(config->impl); });
}

sa_status sa_cmd_ingest_check(const sa_config_t* config, char** report) {
    return run_with_report(config, report, [](const statarb::RunConfig& c, std::ostream& out) {
        statarb::cmd_ingest_check(c, out);
    });
}

sa_status sa_cmd_stitch(const sa_config_t* config) {
    if (!config) {
        g_last_error = "null config handle";
        return SA_E_CONFIG;
    }
    return guarded([&] { statarb::cmd_stitch(config->impl); });
}

sa_status sa_cmd_panel(const sa_config_t* config, char** report) {
    return run_with_report(config, report, [](const statarb::RunConfig& c, std::ostream& out) {
        statarb::cmd_panel(c, out);
    });
}

sa_status sa_cmd_run(const sa_config_t* config, char** report) {
    return run_with_report(config, report, [](const statarb::RunConfig& c, std::ostream& out) {
        statarb::cmd_run(c, out);
    });
}

sa_status sa_cmd_report(const sa_config_t* config, char** report) {
    return run_with_report(config, report, [](const statarb::RunConfig& c, std::ostream& out) {
        statarb::cmd_report(c, out);
    });
}

void sa_string_free(char* s) { delete[] s; }

}  // extern "C"
