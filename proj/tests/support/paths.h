#ifndef AERONET_TESTS_SUPPORT_PATHS_H_
#define AERONET_TESTS_SUPPORT_PATHS_H_

#include <filesystem>
#include <string>

namespace aeronet::testing {

inline std::filesystem::path ScenarioPath(const std::string& file) {
  return std::filesystem::path(AERONET_TEST_SCENARIO_DIR) / file;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path ScratchDir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("aeronet_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace aeronet::testing

#endif  // AERONET_TESTS_SUPPORT_PATHS_H_
