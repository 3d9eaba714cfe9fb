#pragma once

#include "CLI11.hpp"

namespace urnet::cli {

// JSON config files for CLI11. Top-level keys are global options; a key
// naming a subcommand holds an object of that subcommand's options, e.g.
// {"jobs": 2, "simulate": {"steps": 100000, "seed": 7}}.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool write_description,
                        std::string prefix) const override;
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override;
};

}  // namespace urnet::cli
