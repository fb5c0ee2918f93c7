#pragma once

// Dataset ingestion (Ausgrid solar home CSV), synthetic profile generation,
// and persistence of datasets and codecs.

#include "gridcodec/codec.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace gridcodec {

inline constexpr int kAusgridSlots = 48;

/// Reads the Ausgrid "Solar home electricity data" layout: optional title
/// rows, a header starting with "Customer", then rows of
/// Customer, Generator Capacity, Postcode, Consumption Category, date,
/// 48 half-hourly kWh values (0:30 .. 0:00) and an optional quality flag.
/// Each row matching the customer (all customers if unset) and category
/// becomes one profile, in file order.
ProfileDataset load_ausgrid(const std::filesystem::path& path, const std::optional<std::string>& customer_id,
                            const std::string& category = "GC");

struct SynthParams {
  int bump_count = 2;
  double bump_scale = 3.0;
  double noise_scale = 0.2;
};

/// Sparse, sharp Gaussian bumps plus uniform noise, clipped at zero.
/// Deterministic for a given seed.
ProfileDataset synth_generate(std::uint64_t seed, int count, int dim, const SynthParams& params = {});

/// Internal format: one profile per line, comma separated, shortest
/// round-trip decimal representation.
void save_dataset(const std::filesystem::path& path, const ProfileDataset& dataset);
ProfileDataset load_dataset(const std::filesystem::path& path);
std::string dataset_to_csv(const ProfileDataset& dataset);
ProfileDataset dataset_from_csv(const std::string& text);

/// {"kind":"linear","N":..,"P":..,"B":[[...]]} or
/// {"kind":"autoencoder","N":..,"P":..,"W1":[[...]],"W2":[[...]]}.
nlohmann::json codec_to_json(const Codec& codec);
Codec codec_from_json(const nlohmann::json& json);
void save_codec(const std::filesystem::path& path, const Codec& codec);
Codec load_codec(const std::filesystem::path& path);

/// Writes `text` to `path`, throwing IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace gridcodec
