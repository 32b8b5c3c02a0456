#pragma once

#include <iosfwd>
#include <string>

#include "dhf/expert.hpp"

namespace dhf {

// Text serialization of fitted experts, one record per parameter block.
// Doubles use shortest round-trip formatting, so a reloaded model predicts
// bit-identically.
void save_model(const ExpertModel& model, std::ostream& os);
void save_model_file(const ExpertModel& model, const std::string& path);

ExpertModel load_model(std::istream& is);
ExpertModel load_model_file(const std::string& path);

} // namespace dhf
