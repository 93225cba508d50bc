#pragma once

#include <stdexcept>
#include <string>

namespace mad {

enum class errc {
    file_not_found,
    unsupported_format,
    corrupt_image,
    io_error,
    invalid_target,
    image_too_small,
    block_too_small,
    empty_cloud,
    cloud_too_large,
    size_mismatch,
    dimension_mismatch,
    single_class,
    non_finite_feature,
    missing_class,
    too_few_morphs,
    kind_mismatch,
    alpha_out_of_range,
    parse_error,
    invalid_config,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::file_not_found: return "file_not_found";
        case errc::unsupported_format: return "unsupported_format";
        case errc::corrupt_image: return "corrupt_image";
        case errc::io_error: return "io_error";
        case errc::invalid_target: return "invalid_target";
        case errc::image_too_small: return "image_too_small";
        case errc::block_too_small: return "block_too_small";
        case errc::empty_cloud: return "empty_cloud";
        case errc::cloud_too_large: return "cloud_too_large";
        case errc::size_mismatch: return "size_mismatch";
        case errc::dimension_mismatch: return "dimension_mismatch";
        case errc::single_class: return "single_class";
        case errc::non_finite_feature: return "non_finite_feature";
        case errc::missing_class: return "missing_class";
        case errc::too_few_morphs: return "too_few_morphs";
        case errc::kind_mismatch: return "kind_mismatch";
        case errc::alpha_out_of_range: return "alpha_out_of_range";
        case errc::parse_error: return "parse_error";
        case errc::invalid_config: return "invalid_config";
    }
    return "unknown";
}

/// Exception carrying a machine-checkable error code next to the message.
class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) {
    throw Error(code, what);
}

} // namespace mad
