// Query the bundled lexicon: prints the ranked related words for a lemma.
//
// Usage: related_words_demo <word> [sim_t] [num_t] [path-to-data/lexicon]

#include <cstdlib>
#include <iostream>

#include "epic/lexicon.hpp"

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: related_words_demo <word> [sim_t] [num_t] [lexicon-dir]\n";
        return 2;
    }
    std::string word = argv[1];
    double sim_t = argc > 2 ? std::atof(argv[2]) : 0.5;
    size_t num_t = argc > 3 ? std::strtoul(argv[3], nullptr, 10) : 10;
    std::string dir = argc > 4 ? argv[4] : "data/lexicon";

    auto lexicon = epic::Lexicon::load(
        {dir + "/embeddings.vec", dir + "/synonyms.tsv", "", dir + "/lemma_exceptions.tsv"});

    auto lemma = lexicon.lemmatize(word);
    if (lemma != word) std::cout << word << " -> " << lemma << "\n";
    for (const auto& w : lexicon.get_related_words({lemma, sim_t, num_t})) {
        if (lexicon.embeddings().contains(lemma) && lexicon.embeddings().contains(w) && w != lemma)
            std::cout << w << "  (" << lexicon.embeddings().similarity(lemma, w) << ")\n";
        else
            std::cout << w << "\n";
    }
    return 0;
}
