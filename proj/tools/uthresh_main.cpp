// Command-line front end. Everything here goes through the C API of the
// shared library: argv is folded into a config document plus an overrides
// object, and uth_run does the rest.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uthresh.h"

namespace {

// exit codes: 0 ok, 2 config, 3 data, 4 assumption violated, 5 internal
int exit_code_for(uth_status status) {
    switch (status) {
        case UTH_OK: return 0;
        case UTH_ERR_CONFIG:
        case UTH_ERR_INVALID_ARGUMENT: return 2;
        case UTH_ERR_DATA:
        case UTH_ERR_IO: return 3;
        case UTH_ERR_ASSUMPTION_VIOLATED: return 4;
        default: return 5;
    }
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

struct Flags {
    std::string config_path;
    std::string input;
    std::string out;
    std::string kernel;  // name:bandwidth[:scale]
    std::string basis;
    std::vector<std::size_t> n;
    std::vector<double> eta;
    double T = std::nan("");
    double s = std::nan("");
    long long R = -1;
    long long threads = -1;
    unsigned long long seed = 0;
    bool seed_set = false;
};

std::string overrides_json(const Flags& f) {
    std::ostringstream o;
    o << '{';
    bool first = true;
    auto sep = [&]() {
        if (!first) o << ',';
        first = false;
    };
    if (f.seed_set) {
        sep();
        o << "\"seed\":" << f.seed;
    }
    if (!f.out.empty()) {
        sep();
        o << "\"out\":\"" << json_escape(f.out) << '"';
    }
    if (!f.input.empty()) {
        sep();
        o << "\"input\":\"" << json_escape(f.input) << '"';
    }
    if (f.threads >= 0) {
        sep();
        o << "\"threads\":" << f.threads;
    }
    if (!std::isnan(f.T)) {
        sep();
        o << "\"T\":" << f.T;
    }
    if (!std::isnan(f.s)) {
        sep();
        o << "\"s\":" << f.s;
    }
    if (f.R >= 0) {
        sep();
        o << "\"R\":" << f.R;
    }
    if (!f.n.empty()) {
        sep();
        o << "\"n\":[";
        for (std::size_t i = 0; i < f.n.size(); ++i) o << (i ? "," : "") << f.n[i];
        o << ']';
    }
    if (!f.eta.empty()) {
        sep();
        o << "\"eta\":[";
        for (std::size_t i = 0; i < f.eta.size(); ++i) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", f.eta[i]);
            o << (i ? "," : "") << buf;
        }
        o << ']';
    }
    if (!f.basis.empty()) {
        sep();
        o << "\"basis\":\"" << json_escape(f.basis) << '"';
    }
    if (!f.kernel.empty()) {
        // name:bandwidth[:scale]
        std::string name = f.kernel;
        double bandwidth = 1.0, scale = 1.0;
        auto c1 = f.kernel.find(':');
        if (c1 != std::string::npos) {
            name = f.kernel.substr(0, c1);
            auto rest = f.kernel.substr(c1 + 1);
            auto c2 = rest.find(':');
            try {
                if (c2 == std::string::npos) {
                    bandwidth = std::stod(rest);
                } else {
                    bandwidth = std::stod(rest.substr(0, c2));
                    scale = std::stod(rest.substr(c2 + 1));
                }
            } catch (const std::exception&) {
                std::fprintf(stderr, "error: --kernel expects name:bandwidth[:scale]\n");
                std::exit(2);
            }
        }
        sep();
        o << "\"kernel\":{\"name\":\"" << json_escape(name) << "\",\"bandwidth\":" << bandwidth
          << ",\"scale\":" << scale << '}';
    }
    o << '}';
    return o.str();
}

int run(const std::string& command, const Flags& flags) {
    std::string config_text;
    if (!flags.config_path.empty()) {
        std::ifstream in(flags.config_path, std::ios::binary);
        if (!in) {
            std::fprintf(stderr, "error: cannot open config '%s'\n", flags.config_path.c_str());
            return 3;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        config_text = buf.str();
    } else {
        config_text = "{\"command\":\"" + json_escape(command) + "\"}";
    }

    std::string overrides = overrides_json(flags);
    if (!command.empty() && !flags.config_path.empty()) {
        // subcommand wins over the config's command field
        overrides.insert(overrides.size() - 1,
                         std::string(overrides.size() > 2 ? "," : "") + "\"command\":\"" +
                             json_escape(command) + "\"");
    }

    char* summary = nullptr;
    char* warnings = nullptr;
    uth_status status = uth_run(config_text.c_str(), overrides.c_str(), &summary, &warnings);
    if (warnings && warnings[0]) std::fprintf(stderr, "%s", warnings);
    uth_string_free(warnings);
    if (status != UTH_OK) {
        std::fprintf(stderr, "error: %s\n", uth_last_error());
        uth_string_free(summary);
        return exit_code_for(status);
    }
    if (summary && summary[0]) std::printf("%s\n", summary);
    uth_string_free(summary);
    return 0;
}

void add_common(CLI::App* cmd, Flags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON config document");
    cmd->add_option("--seed", flags.seed, "master seed")->each([&](const std::string&) {
        flags.seed_set = true;
    });
    cmd->add_option("--out", flags.out, "output directory");
    cmd->add_option("--threads", flags.threads, "worker threads (0 = auto)");
    cmd->add_option("--input", flags.input, "input CSV (header x,y)");
    cmd->add_option("--n", flags.n, "sample size(s)")->delimiter(',');
    cmd->add_option("--T", flags.T, "threshold constant");
    cmd->add_option("--eta", flags.eta, "eta grid")->delimiter(',');
    cmd->add_option("--R", flags.R, "replications");
    cmd->add_option("--kernel", flags.kernel, "kernel name:bandwidth[:scale]");
    cmd->add_option("--basis", flags.basis, "wavelet family");
    cmd->add_option("--s", flags.s, "smoothness / sparsity exponent");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"universal thresholding estimators: kernel and wavelet fits, "
                 "assumption checks, Monte Carlo accuracy-confidence studies"};
    app.require_subcommand(0, 1);

    Flags flags;
    const char* names[] = {"fit-rkhs", "fit-wavelet", "check-assumption", "simulate-ac",
                           "rate-study"};
    for (const char* name : names) add_common(app.add_subcommand(name), flags);
    add_common(&app, flags);

    CLI11_PARSE(app, argc, argv);

    std::string command;
    for (auto* sub : app.get_subcommands()) command = sub->get_name();
    if (command.empty() && flags.config_path.empty()) {
        std::fprintf(stderr, "error: give a subcommand or --config\n%s\n", app.help().c_str());
        return 2;
    }
    return run(command, flags);
}
