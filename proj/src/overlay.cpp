#include "overlay.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <queue>
#include <stdexcept>

namespace prosa {

using nlohmann::json;

const char* link_kind_name(LinkKind k) {
    switch (k) {
        case LinkKind::AL: return "AL";
        case LinkKind::TSL: return "TSL";
        case LinkKind::FSL: return "FSL";
    }
    return "?";
}

TermVector peer_knowledge(const std::vector<DocId>& resources, const Corpus& corpus,
                          std::size_t cap) {
    TermVector sum;
    for (DocId d : resources) {
        if (d >= corpus.num_docs()) {
            throw std::invalid_argument("peer_knowledge: doc id out of range");
        }
        sum = TermVector::weighted_sum(sum, 1.0, corpus.documents[d].vector, 1.0);
    }
    sum.normalize();
    sum.truncate(cap);
    sum.normalize();
    return sum;
}

Peer& Network::peer(PeerId id) {
    auto it = peers_.find(id);
    if (it == peers_.end()) throw std::invalid_argument("unknown peer id " + std::to_string(id));
    return it->second;
}

const Peer& Network::peer(PeerId id) const {
    auto it = peers_.find(id);
    if (it == peers_.end()) throw std::invalid_argument("unknown peer id " + std::to_string(id));
    return it->second;
}

void Network::require_peer(PeerId id) const {
    if (!has_peer(id)) throw std::invalid_argument("unknown peer id " + std::to_string(id));
}

void Network::join(Peer p, std::size_t n) {
    if (has_peer(p.id)) {
        throw std::invalid_argument("join: duplicate peer id " + std::to_string(p.id));
    }
    std::vector<PeerId> existing;
    existing.reserve(peers_.size());
    for (const auto& [id, _] : peers_) existing.push_back(id);

    p.out_links.clear();
    for (PeerId target : rng_.sample(std::move(existing), n)) {
        p.out_links.emplace(target, LinkLabel{});
    }
    peers_.emplace(p.id, std::move(p));
}

void Network::update_link(PeerId cur, PeerId source, const TermVector& q) {
    if (cur == source) throw std::invalid_argument("update_link: self-link");
    require_peer(cur);
    require_peer(source);

    auto& links = peers_.at(cur).out_links;
    auto it = links.find(source);
    if (it == links.end() || it->second.kind == LinkKind::AL) {
        LinkLabel label;
        label.kind = LinkKind::TSL;
        label.weight = q;
        label.query_count = 1;
        links[source] = std::move(label);
        return;
    }
    if (it->second.kind == LinkKind::TSL) {
        LinkLabel& label = it->second;
        const double n = static_cast<double>(label.query_count);
        TermVector mean =
            TermVector::weighted_sum(label.weight, n / (n + 1.0), q, 1.0 / (n + 1.0));
        mean.normalize();
        mean.truncate(vector_cap_);
        mean.normalize();
        label.weight = std::move(mean);
        label.query_count += 1;
        return;
    }
    // FSL: no update needed.
}

void Network::add_fsl(PeerId source, PeerId target) {
    if (source == target) throw std::invalid_argument("add_fsl: self-link");
    require_peer(source);
    require_peer(target);
    LinkLabel label;
    label.kind = LinkKind::FSL;
    label.weight = peers_.at(target).pk;
    label.query_count = 0;
    peers_.at(source).out_links[target] = std::move(label);
}

TopologyStats topology_stats(const Network& network) {
    const auto& peers = network.peers();
    if (peers.size() < 2) {
        throw std::invalid_argument("topology_stats: need at least 2 peers");
    }
    TopologyStats stats;

    // Dense index for BFS.
    std::map<PeerId, std::size_t> index;
    std::vector<const Peer*> nodes;
    for (const auto& [id, p] : peers) {
        index.emplace(id, nodes.size());
        nodes.push_back(&p);
    }
    const std::size_t n = nodes.size();

    double clustering_sum = 0.0;
    for (const auto* p : nodes) {
        for (const auto& [target, label] : p->out_links) {
            stats.link_kind_counts[static_cast<std::size_t>(label.kind)] += 1;
        }
        const auto& links = p->out_links;
        const std::size_t k = links.size();
        if (k < 2) continue;
        std::size_t among = 0;
        for (const auto& [a, la] : links) {
            const auto& a_links = peers.at(a).out_links;
            for (const auto& [b, lb] : links) {
                if (a != b && a_links.count(b)) ++among;
            }
        }
        clustering_sum += static_cast<double>(among) / static_cast<double>(k * (k - 1));
    }
    stats.clustering_coefficient = clustering_sum / static_cast<double>(n);

    std::uint64_t path_sum = 0, path_count = 0;
    std::vector<int> dist(n);
    for (std::size_t s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[s] = 0;
        std::queue<std::size_t> q;
        q.push(s);
        while (!q.empty()) {
            const std::size_t u = q.front();
            q.pop();
            for (const auto& [target, _] : nodes[u]->out_links) {
                const std::size_t v = index.at(target);
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    q.push(v);
                }
            }
        }
        for (std::size_t v = 0; v < n; ++v) {
            if (v == s) continue;
            if (dist[v] < 0) {
                stats.unreachable_pairs += 1;
            } else {
                path_sum += static_cast<std::uint64_t>(dist[v]);
                path_count += 1;
            }
        }
    }
    if (path_count) {
        stats.avg_shortest_path = static_cast<double>(path_sum) / static_cast<double>(path_count);
    }
    return stats;
}

std::string network_snapshot_json(const Network& network) {
    json j;
    json peers = json::array();
    json links = json::array();
    for (const auto& [id, p] : network.peers()) {
        json pk = json::array();
        for (const auto& [term, w] : p.pk.entries()) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.17g", w);
            pk.push_back(json::array({term, std::string(buf)}));
        }
        peers.push_back({{"id", id}, {"docs", p.resources}, {"pk", std::move(pk)}});
        for (const auto& [target, label] : p.out_links) {
            json weight = json::array();
            for (const auto& [term, w] : label.weight.entries()) {
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%.17g", w);
                weight.push_back(json::array({term, std::string(buf)}));
            }
            links.push_back({{"source", id},
                             {"target", target},
                             {"kind", link_kind_name(label.kind)},
                             {"weight", std::move(weight)},
                             {"query_count", label.query_count}});
        }
    }
    j["peers"] = std::move(peers);
    j["links"] = std::move(links);
    return j.dump();
}

void save_network_snapshot(const Network& network, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write network snapshot: " + path);
    out << network_snapshot_json(network) << "\n";
}

std::uint64_t network_checksum(const Network& network) {
    return fnv1a(network_snapshot_json(network));
}

}  // namespace prosa
