#include <gtest/gtest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "aeronet/error.h"
#include "aeronet/rl/checkpoint.h"
#include "support/paths.h"

namespace aeronet {
namespace {

Checkpoint Sample() {
  Checkpoint c;
  RngStream rng(9, "init");
  c.network = QNetwork::Initialized(NetworkShape{10, {16, 8}, 3}, rng);
  c.observation.tau_scale_s = 12.5;
  c.reward.w3 = 0.35;
  c.dqn.n_step = 4;
  c.dqn.hidden = {16, 8};
  c.candidate_gnbs = {2, 5, 7};
  c.interface_group = 1;
  c.episodes_trained = 42;
  return c;
}

std::string ReadAll(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void WriteAll(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << bytes;
}

TEST(Checkpoint, RoundTripIsExact) {
  const auto dir = testing::ScratchDir("checkpoint_roundtrip");
  const Checkpoint c = Sample();
  SaveCheckpoint(dir / "policy.bin", c);
  const Checkpoint back = LoadCheckpoint(dir / "policy.bin");
  EXPECT_EQ(back.network.shape(), c.network.shape());
  ASSERT_EQ(back.network.param_count(), c.network.param_count());
  for (std::size_t i = 0; i < c.network.param_count(); ++i) {
    ASSERT_EQ(back.network.params()[i], c.network.params()[i]) << i;
  }
  EXPECT_EQ(back.observation.tau_scale_s, 12.5);
  EXPECT_EQ(back.reward.w3, 0.35);
  EXPECT_EQ(back.dqn.n_step, 4);
  EXPECT_EQ(back.candidate_gnbs, c.candidate_gnbs);
  EXPECT_EQ(back.interface_group, 1);
  EXPECT_EQ(back.episodes_trained, 42);
  EXPECT_TRUE(std::filesystem::exists(dir / "policy.bin.txt"));
  const std::string bytes = ReadAll(dir / "policy.bin");
  EXPECT_EQ(bytes.substr(0, 8), "AERONETQ");
  SaveCheckpoint(dir / "again.bin", back);
  EXPECT_EQ(ReadAll(dir / "again.bin"), bytes);
}

TEST(Checkpoint, RejectsCorruptFiles) {
  const auto dir = testing::ScratchDir("checkpoint_corrupt");
  SaveCheckpoint(dir / "good.bin", Sample());
  const std::string good = ReadAll(dir / "good.bin");

  std::string bad_magic = good;
  bad_magic[0] = 'X';
  WriteAll(dir / "magic.bin", bad_magic);
  EXPECT_THROW(LoadCheckpoint(dir / "magic.bin"), ConfigError);

  std::string bad_version = good;
  bad_version[8] = static_cast<char>(kCheckpointVersion + 1);
  WriteAll(dir / "version.bin", bad_version);
  EXPECT_THROW(LoadCheckpoint(dir / "version.bin"), ConfigError);

  WriteAll(dir / "short.bin", good.substr(0, good.size() - 5));
  EXPECT_THROW(LoadCheckpoint(dir / "short.bin"), ConfigError);
  WriteAll(dir / "tiny.bin", good.substr(0, 10));
  EXPECT_THROW(LoadCheckpoint(dir / "tiny.bin"), ConfigError);

  EXPECT_THROW(LoadCheckpoint(dir / "missing.bin"), ConfigError);
}

}  // namespace
}  // namespace aeronet
