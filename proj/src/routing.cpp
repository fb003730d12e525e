#include "routing.hpp"

#include <algorithm>
#include <stdexcept>

namespace prosa {

void RoutingParams::validate() const {
    if (doc_threshold < 0.0 || doc_threshold > 1.0 || flood_threshold < 0.0 ||
        flood_threshold > 1.0) {
        throw std::invalid_argument("routing params: thresholds must lie in [0,1]");
    }
    if (rw_ttl < 1 || flood_ttl < 1 || max_hops < 1) {
        throw std::invalid_argument("routing params: ttls and max_hops must be >= 1");
    }
}

namespace {

void validate_query(const Network& network, const QueryMessage& qm) {
    if (!network.has_peer(qm.source)) {
        throw std::invalid_argument("query source " + std::to_string(qm.source) +
                                    " is not in the network");
    }
    if (qm.q.empty()) throw std::invalid_argument("query vector is empty");
    if (qm.n_r < 1) throw std::invalid_argument("n_r must be >= 1");
}

}  // namespace

ResourceMatches resources_relevance(const Peer& peer, const TermVector& q,
                                    std::uint32_t needed, const RoutingParams& params,
                                    const Corpus& corpus) {
    if (needed < 1) throw std::invalid_argument("resources_relevance: needed must be >= 1");
    std::vector<std::pair<double, DocId>> scored;
    for (DocId d : peer.resources) {
        const double sim = cosine_similarity(corpus.documents[d].vector, q);
        if (sim >= params.doc_threshold) scored.emplace_back(sim, d);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& x, const auto& y) {
        if (x.first != y.first) return x.first > y.first;
        return x.second < y.second;
    });
    ResourceMatches out;
    out.num_res = static_cast<std::uint32_t>(std::min<std::size_t>(scored.size(), needed));
    out.matches.reserve(out.num_res);
    for (std::uint32_t i = 0; i < out.num_res; ++i) out.matches.push_back(scored[i].second);
    return out;
}

double peer_relevance(const LinkLabel& label, const TermVector& q) {
    if (label.kind == LinkKind::AL) return 0.0;
    return cosine_similarity(label.weight, q);
}

std::optional<PeerId> select_next_peer(const Peer& peer, const TermVector& q,
                                       const std::unordered_set<PeerId>& visited, Rng& rng) {
    double best_rel = 0.0;
    std::optional<PeerId> best;
    std::vector<PeerId> fallback;
    for (const auto& [target, label] : peer.out_links) {
        if (visited.count(target)) continue;
        const double rel = peer_relevance(label, q);
        if (rel > 0.0 && (!best || rel > best_rel)) {  // map order breaks ties by id
            best_rel = rel;
            best = target;
        }
        fallback.push_back(target);
    }
    if (best) return best;
    if (fallback.empty()) return std::nullopt;
    return fallback[rng.below(fallback.size())];
}

QueryOutcome exec_query_prosa(Network& network, const QueryMessage& qm,
                              const RoutingParams& params, const Corpus& corpus) {
    validate_query(network, qm);
    QueryOutcome out;
    out.qid = qm.qid;

    struct Delivery {
        PeerId peer;
        std::uint32_t remaining;
        std::uint32_t level;
    };
    std::vector<Delivery> stack;  // LIFO, mirrors the recursive forwarding order
    stack.push_back({qm.source, qm.n_r, 0});
    std::unordered_set<PeerId> processed;

    while (!stack.empty()) {
        const Delivery dv = stack.back();
        stack.pop_back();
        out.deepness = std::max(out.deepness, dv.level);
        if (!processed.insert(dv.peer).second) continue;  // one response per qid
        out.visited_nodes.push_back(dv.peer);

        if (dv.peer != qm.source) network.update_link(dv.peer, qm.source, qm.q);

        Peer& cur = network.peer(dv.peer);
        const auto [matches, num_res] =
            resources_relevance(cur, qm.q, dv.remaining, params, corpus);

        if (num_res == 0) {
            const auto next = select_next_peer(cur, qm.q, processed, network.rng());
            if (next && dv.level < params.max_hops) {
                out.used_links.emplace_back(dv.peer, *next);
                out.link_kind_used[static_cast<std::size_t>(
                    cur.out_links.at(*next).kind)] += 1;
                stack.push_back({*next, dv.remaining, dv.level + 1});
            }
            continue;
        }

        for (DocId d : matches) out.retrieved.emplace(dv.peer, d);
        if (dv.peer != qm.source) network.add_fsl(qm.source, dv.peer);

        if (num_res < dv.remaining && dv.level < params.max_hops) {
            // Semantic flooding with the reduced budget.
            std::vector<PeerId> targets;
            for (const auto& [target, label] : cur.out_links) {
                if (peer_relevance(label, qm.q) > params.flood_threshold) {
                    targets.push_back(target);
                }
            }
            for (PeerId t : targets) {
                out.used_links.emplace_back(dv.peer, t);
                out.link_kind_used[static_cast<std::size_t>(cur.out_links.at(t).kind)] += 1;
            }
            // Push in reverse so the lowest-id neighbor is processed first.
            for (auto it = targets.rbegin(); it != targets.rend(); ++it) {
                stack.push_back({*it, dv.remaining - num_res, dv.level + 1});
            }
        }
    }
    out.answered = !out.retrieved.empty();
    return out;
}

QueryOutcome exec_query_flood(const Network& network, const QueryMessage& qm,
                              const RoutingParams& params, const Corpus& corpus) {
    validate_query(network, qm);
    QueryOutcome out;
    out.qid = qm.qid;

    std::unordered_set<PeerId> processed{qm.source};
    out.visited_nodes.push_back(qm.source);
    auto collect = [&](PeerId id) {
        const auto [matches, num_res] =
            resources_relevance(network.peer(id), qm.q, qm.n_r, params, corpus);
        for (DocId d : matches) out.retrieved.emplace(id, d);
    };
    collect(qm.source);

    std::vector<PeerId> frontier{qm.source};
    std::uint32_t level = 0;
    while (!frontier.empty() && level < params.flood_ttl &&
           out.retrieved.size() < qm.n_r) {
        std::vector<PeerId> next;
        for (PeerId cur : frontier) {
            for (const auto& [target, label] : network.peer(cur).out_links) {
                out.used_links.emplace_back(cur, target);
                out.link_kind_used[static_cast<std::size_t>(label.kind)] += 1;
                out.deepness = std::max(out.deepness, level + 1);
                if (processed.insert(target).second) {
                    out.visited_nodes.push_back(target);
                    collect(target);
                    next.push_back(target);
                }
            }
        }
        frontier = std::move(next);
        ++level;
    }
    out.answered = !out.retrieved.empty();
    return out;
}

QueryOutcome exec_query_rw(const Network& network, const QueryMessage& qm,
                           const RoutingParams& params, const Corpus& corpus, Rng& rng) {
    validate_query(network, qm);
    QueryOutcome out;
    out.qid = qm.qid;

    std::unordered_set<PeerId> processed{qm.source};
    out.visited_nodes.push_back(qm.source);
    auto collect = [&](PeerId id) {
        const std::uint32_t remaining =
            qm.n_r - static_cast<std::uint32_t>(std::min<std::size_t>(out.retrieved.size(), qm.n_r));
        if (remaining == 0) return;
        const auto [matches, num_res] =
            resources_relevance(network.peer(id), qm.q, remaining, params, corpus);
        for (DocId d : matches) out.retrieved.emplace(id, d);
    };
    collect(qm.source);

    PeerId cur = qm.source;
    std::uint32_t steps = 0;
    while (out.retrieved.size() < qm.n_r && steps < params.rw_ttl) {
        const auto& links = network.peer(cur).out_links;
        if (links.empty()) break;
        std::vector<PeerId> unvisited, all;
        for (const auto& [target, label] : links) {
            all.push_back(target);
            if (!processed.count(target)) unvisited.push_back(target);
        }
        const auto& pool = unvisited.empty() ? all : unvisited;
        const PeerId next = pool[rng.below(pool.size())];
        out.used_links.emplace_back(cur, next);
        out.link_kind_used[static_cast<std::size_t>(links.at(next).kind)] += 1;
        ++steps;
        if (processed.insert(next).second) {
            out.visited_nodes.push_back(next);
            collect(next);
        }
        cur = next;
    }
    out.deepness = steps;
    out.answered = !out.retrieved.empty();
    return out;
}

}  // namespace prosa
