#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "smcsweep/blackbox/simulator.hpp"

// In-process simulator that records every request, for transcript checks.
class RecordingSimulator final : public smcsweep::blackbox::Simulator {
 public:
  // value(name, step, seed) supplies observations.
  using Source = std::function<double(std::string_view, std::int64_t, std::uint64_t)>;

  explicit RecordingSimulator(Source source)
      : Simulator(smcsweep::blackbox::SimulatorKind::in_process), source_(std::move(source)) {}

  std::vector<std::string> transcript;
  std::size_t resets = 0;
  std::size_t advances = 0;
  std::size_t observes = 0;

 protected:
  void do_reset(std::uint64_t seed) override {
    seed_ = seed;
    t_ = 1;
    ++resets;
    transcript.push_back("reset " + std::to_string(seed));
  }
  void do_advance() override {
    ++t_;
    ++advances;
    transcript.push_back("next");
  }
  double do_observe(std::string_view name) override {
    ++observes;
    transcript.push_back(std::string(name));
    return source_(name, t_, seed_);
  }

 private:
  Source source_;
  std::uint64_t seed_ = 0;
  std::int64_t t_ = 0;
};
