#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "corpus.hpp"
#include "overlay.hpp"
#include "term_vector.hpp"

namespace prosa::test {

inline TermVector tv(std::vector<std::pair<TermId, double>> entries) {
    return TermVector(std::move(entries));
}

inline TermVector unit(std::vector<std::pair<TermId, double>> entries) {
    TermVector v(std::move(entries));
    v.normalize();
    return v;
}

// Corpus where each document holds exactly one private term, so every
// document vector is the unit vector on that term and all documents are
// pairwise orthogonal. Doc i gets term "d<i>".
inline Corpus orthogonal_corpus(std::size_t n_docs, const std::string& topic = "math") {
    std::vector<CountedDoc> docs;
    for (std::size_t i = 0; i < n_docs; ++i) {
        docs.push_back({topic, {{"d" + std::to_string(i), 1}}});
    }
    return build_corpus_from_counts(docs);
}

// Adds a peer with the given resources and no links; pk is computed.
inline void add_peer(Network& net, PeerId id, const Corpus& corpus,
                     std::vector<DocId> resources = {}) {
    Peer p;
    p.id = id;
    p.resources = std::move(resources);
    p.pk = peer_knowledge(p.resources, corpus, net.vector_cap());
    net.join(std::move(p), 0);
}

// Directed edge helper for hand-built fixtures.
inline void add_al(Network& net, PeerId from, PeerId to) {
    net.peer(from).out_links[to] = LinkLabel{LinkKind::AL, TermVector{}, 0};
}

inline bool approx_eq(double a, double b, double tol = 1e-9) {
    return std::fabs(a - b) <= tol;
}

}  // namespace prosa::test
