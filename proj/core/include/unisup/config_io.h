#pragma once

#include <string>
#include <string_view>

#include "unisup/datamodel.h"

namespace unisup {

// Keys are the PipelineConfig field names. channel_caps is written as
// "ch0:1000,ch1:1000"; list-valued fields are comma separated. Keys absent
// from the text keep their defaults. The result is validated.
PipelineConfig ParseConfig(std::string_view text,
                           std::string_view origin = "<config>");
PipelineConfig LoadConfigFile(const std::string& path);
std::string FormatConfig(const PipelineConfig& config);

}  // namespace unisup
