#pragma once

#include <fstream>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "gossipsim/metrics.hpp"
#include "gossipsim/rng.hpp"
#include "gossipsim/types.hpp"

namespace gossipsim {

struct LoadedSignedNetwork {
  SignedNetwork network;
  std::vector<std::string> labels;  // labels[id] = original node label
  std::vector<std::string> warnings;
};

// CSV with header a,b,sign and sign in {+1,-1} (also + and -). Labels are mapped
// to dense ids in first-appearance order. A repeated pair with the same sign is
// ignored with a warning; with the opposite sign it is a ValidationError.
// Lines of the form "#node,<label>" declare isolated nodes.
LoadedSignedNetwork parse_signed_network(std::istream& in, const std::string& source);
LoadedSignedNetwork load_signed_network(const std::string& path);

// Writes edges with labels (or ids when labels is empty); isolated nodes are
// emitted as "#node,<label>" lines so the round-trip keeps them.
void write_signed_network(std::ostream& out, const SignedNetwork& net, const std::vector<std::string>& labels = {});
// Writes the network and its id mapping file (<path>.ids.csv).
void save_signed_network(const std::string& path, const SignedNetwork& net, const std::vector<std::string>& labels = {});
std::string id_mapping_path(const std::string& network_path);

// Each unordered pair independently positive with pos_density, negative with
// neg_density, absent otherwise.
SignedNetwork generate_signed_network(std::size_t n, double pos_density, double neg_density, RngStream& rng);

bool is_connected(const SignedNetwork& net);

// Edge list with header a,b.
void write_game_network(std::ostream& out, const GameNetwork& net);

// Writes via a temporary sibling file and rename. Failures throw std::runtime_error
// naming the path.
void atomic_write(const std::string& path, const std::string& content);

// Incremental counterpart of atomic_write. Nothing appears at `path` until
// commit(); an uncommitted file is removed on destruction.
class AtomicFile {
 public:
  explicit AtomicFile(std::string path);
  ~AtomicFile();
  AtomicFile(const AtomicFile&) = delete;
  AtomicFile& operator=(const AtomicFile&) = delete;

  void write(std::string_view chunk);
  void commit();

 private:
  std::string path_;
  std::string tmp_;
  std::ofstream out_;
  bool committed_ = false;
};

std::string run_records_jsonl(const std::vector<RunRecord>& records);
void write_results(const std::string& runs_path, const std::vector<RunRecord>& records);
void write_aggregate(const std::string& csv_path, const AggregateResult& aggregate);

// Text for --describe-formats.
std::string describe_formats();

}  // namespace gossipsim
