#pragma once

// Text checkpoint, version 1:
//
//   gti-checkpoint 1
//   meta <key> <value>                        (zero or more)
//   param <name> <ndims> <d0> ... <dn-1>      (one block per parameter array)
//   <values, "%.17g", up to 8 per line>
//   end
//
// "%.17g" round-trips doubles exactly, so save -> load -> save is byte-stable.

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gti/errors.hpp"
#include "gti/nn/layers.hpp"

namespace gti::nn {

struct CheckpointEntry {
    std::string name;
    std::vector<std::size_t> dims;
    std::vector<double> values;
};

struct Checkpoint {
    std::map<std::string, std::string> meta;
    std::vector<CheckpointEntry> entries;

    const std::string& require(const std::string& key) const {
        auto it = meta.find(key);
        if (it == meta.end()) throw ArgumentError("checkpoint missing meta key '" + key + "'");
        return it->second;
    }
};

inline void write_checkpoint(const std::string& path, const std::map<std::string, std::string>& meta,
                             const std::vector<Param*>& params) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write checkpoint " + path);
    out << "gti-checkpoint 1\n";
    for (const auto& [k, v] : meta) out << "meta " << k << ' ' << v << '\n';
    char buf[40];
    for (const auto* p : params) {
        out << "param " << p->name << ' ' << p->dims.size();
        for (auto d : p->dims) out << ' ' << d;
        out << '\n';
        for (std::size_t i = 0; i < p->value.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", p->value[i]);
            out << buf << ((i % 8 == 7 || i + 1 == p->value.size()) ? '\n' : ' ');
        }
    }
    out << "end\n";
    if (!out) throw IoError("write failed: " + path);
}

inline Checkpoint read_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open checkpoint " + path);
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "gti-checkpoint" || version != 1) throw ParseError(path, 1, "not a version-1 gti checkpoint");
    Checkpoint ck;
    std::string tag;
    while (in >> tag) {
        if (tag == "end") return ck;
        if (tag == "meta") {
            std::string k, v;
            in >> k;
            std::getline(in >> std::ws, v);
            ck.meta[k] = v;
        } else if (tag == "param") {
            CheckpointEntry e;
            std::size_t nd = 0;
            in >> e.name >> nd;
            std::size_t count = 1;
            for (std::size_t i = 0; i < nd; ++i) {
                std::size_t d = 0;
                in >> d;
                e.dims.push_back(d);
                count *= d;
            }
            e.values.resize(count);
            std::string tok;
            for (auto& v : e.values) {
                in >> tok;
                v = std::strtod(tok.c_str(), nullptr);
            }
            if (!in) throw ParseError(path, 0, "truncated parameter block " + e.name);
            ck.entries.push_back(std::move(e));
        } else {
            throw ParseError(path, 0, "unexpected token '" + tag + "'");
        }
    }
    throw ParseError(path, 0, "missing 'end' marker");
}

/// Copies checkpoint arrays into `params`, matching by position, name and shape.
inline void load_params(const Checkpoint& ck, const std::vector<Param*>& params) {
    if (ck.entries.size() != params.size())
        throw ShapeError("checkpoint has " + std::to_string(ck.entries.size()) + " arrays, model has " +
                         std::to_string(params.size()));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const auto& e = ck.entries[i];
        if (e.name != params[i]->name || e.dims != params[i]->dims)
            throw ShapeError("checkpoint array " + e.name + " does not match model parameter " + params[i]->name);
        params[i]->value.assign(e.values.begin(), e.values.end());
    }
}

}  // namespace gti::nn
