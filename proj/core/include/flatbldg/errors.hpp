#pragma once

#include <stdexcept>
#include <string>

namespace flatbldg {

enum class errc {
  malformed_spec,
  non_crystallographic,
  asymmetric_matrix,
  system_mismatch,
  not_a_root_vector,
  not_diagram_compatible,
  not_affine,
  not_special_vertex,
  not_parallel,
  not_a_translation,
  search_bound_exceeded,
  invalid_thickness,
  thickness_sigma_mismatch,
  gallery_not_minimal,
  not_opposite,
  factorization_mismatch,
  empty_input,
  unknown_generator,
  gem_too_large,
  internal,
};

const char* errc_name(errc c);

class error : public std::runtime_error {
public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

} // namespace flatbldg
