#pragma once

// Command-line driver: `hsx <subcommand> [--key value ...] [--config file]`.
//
// Config files hold key=value lines; blank lines and lines starting with '#'
// are ignored. Flags override file entries. Keys are checked against the
// subcommand's schema, values against the key's type, and every key without a
// default must be given.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "hsx/errors.hpp"

namespace hsx::cli {

class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error("cli", what) {}
    int exit_code() const noexcept override { return 1; }
};

enum class Subcommand { exponents, quadrature, constant, verify_extremal, verify_prop4, minimize, decay_fit, plot };

enum class KeyType { integer, real, text, choice, flag };

struct KeySpec {
    std::string name;
    KeyType type;
    std::string default_value;  ///< empty with required = true means the key must be given
    bool required = false;
    std::vector<std::string> choices;
    std::string help;
};

struct RunConfig {
    Subcommand subcommand;
    std::map<std::string, std::string> params;  ///< resolved, including defaults
    std::string output_dir = ".";

    int get_int(const std::string& key) const;
    double get_real(const std::string& key) const;
    const std::string& get(const std::string& key) const;
    bool get_flag(const std::string& key) const;
};

std::string to_string(Subcommand sub);
Subcommand parse_subcommand(const std::string& name);
const std::vector<KeySpec>& schema(Subcommand sub);

/// argv without the program name. Throws UsageError.
RunConfig parse_args(const std::vector<std::string>& args);

/// Runs the subcommand, writing manifest.json, summary.json and any tables or
/// plots into output_dir. Returns the exit status; errors are reported on err.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run, with --help handling.
int main_entry(int argc, char** argv);

std::string usage();

} // namespace hsx::cli
