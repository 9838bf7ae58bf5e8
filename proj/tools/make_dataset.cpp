// Regenerates the bundled French review corpus and subword vocabulary.
//
// The corpus is synthetic but structurally faithful: 2000 reviews per app and
// per-label positive counts matching the published per-app breakdown
// (Garmin Connect 1260/757/170/493, Huawei Health 1068/819/384/289,
// Samsung Health 1324/491/486/349). Generation is deterministic for a fixed
// seed, so the shipped files are reproducible byte-for-byte.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include <CLI11.hpp>

#include "revmine/corpus.hpp"

namespace {

using revmine::kNumLabels;

struct AppSpec {
  const char* name;
  std::array<int, kNumLabels> counts;  // rating, bug, feature, experience
};

constexpr std::array<AppSpec, 3> kApps = {{
    {"Garmin Connect", {1260, 757, 170, 493}},
    {"Huawei Health", {1068, 819, 384, 289}},
    {"Samsung Health", {1324, 491, 486, 349}},
}};

const std::vector<std::string> kRatingPhrases = {
    "Très bien", "Super application", "Application décevante",
    "Je recommande cette appli", "Excellente appli, rien à redire",
    "Nul, je désinstalle", "Bonne application dans l'ensemble",
    "Pas terrible du tout", "Application au top", "Très bonne appli",
    "Moyenne sans plus", "Parfait pour moi"};

const std::vector<std::string> kBugPhrases = {
    "l'application plante au démarrage",
    "perte de mes données après la dernière mise à jour",
    "erreur de connexion avec la montre",
    "la synchronisation ne fonctionne plus depuis hier",
    "message d'erreur téléphone rooté alors que non",
    "l'appli se ferme toute seule au bout de quelques secondes",
    "impossible de se connecter au serveur",
    "le bluetooth se déconnecte sans arrêt",
    "les pas ne sont plus comptés depuis la mise à jour",
    "écran noir à chaque ouverture"};

const std::vector<std::string> kFeaturePhrases = {
    "il faudrait ajouter un widget pour l'écran d'accueil",
    "merci d'ajouter le suivi du sommeil",
    "une version tablette serait bienvenue",
    "pourriez-vous ajouter l'export des données en CSV",
    "j'aimerais pouvoir partager mes parcours avec mes amis",
    "ajoutez un mode sombre s'il vous plaît",
    "il manque la natation dans les activités",
    "serait-il possible d'ajouter des rappels personnalisés",
    "une fonction arrêter de fumer avec un widget serait top"};

const std::vector<std::string> kExperiencePhrases = {
    "le suivi des pas fonctionne bien au quotidien",
    "les défis m'aident à rester motivé pour marcher",
    "l'historique est clair et facile à consulter",
    "je m'en sers tous les jours pour suivre mes courses",
    "la mesure du rythme cardiaque m'aide beaucoup",
    "cette appli prend bien en compte mes trajets",
    "elle nous aide à rester toujours actifs",
    "le tableau de bord me permet de suivre mes progrès",
    "très pratique pour suivre mon sommeil et mon activité"};

const std::array<const std::vector<std::string>*, kNumLabels> kPhrasePools = {
    &kRatingPhrases, &kBugPhrases, &kFeaturePhrases, &kExperiencePhrases};

std::string slug(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c)))
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    else if (!out.empty() && out.back() != '-')
      out.push_back('-');
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out;
}

// Deals label positives so every review has at least one label and the
// per-label column sums are exact.
std::vector<revmine::LabelSet> assign_labels(const AppSpec& app, std::mt19937_64& rng) {
  constexpr int kReviews = 2000;
  std::vector<size_t> tokens;
  for (size_t l = 0; l < kNumLabels; ++l)
    tokens.insert(tokens.end(), static_cast<size_t>(app.counts[l]), l);
  std::shuffle(tokens.begin(), tokens.end(), rng);

  std::vector<revmine::LabelSet> labels(kReviews);
  size_t next = 0;
  for (int i = 0; i < kReviews; ++i) labels[static_cast<size_t>(i)].set(tokens[next++], true);
  // leftover positives go to reviews that lack that label
  std::vector<size_t> order(kReviews);
  std::iota(order.begin(), order.end(), 0);
  for (; next < tokens.size(); ++next) {
    size_t l = tokens[next];
    std::shuffle(order.begin(), order.end(), rng);
    for (size_t i : order) {
      if (!labels[i][l]) {
        labels[i].set(l, true);
        break;
      }
    }
  }
  return labels;
}

std::string make_text(const revmine::LabelSet& labels, std::mt19937_64& rng) {
  std::vector<std::string> parts;
  for (size_t l = 0; l < kNumLabels; ++l) {
    if (!labels[l]) continue;
    const auto& pool = *kPhrasePools[l];
    parts.push_back(pool[std::uniform_int_distribution<size_t>(0, pool.size() - 1)(rng)]);
  }
  std::shuffle(parts.begin(), parts.end(), rng);
  std::string text;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) text += ". ";
    text += parts[i];
  }
  return text;
}

std::vector<std::string> build_vocab_pieces() {
  std::vector<std::string> pieces = {"<s>", "<pad>", "</s>", "<unk>"};
  for (int b = 0; b < 256; ++b) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "<0x%02X>", b);
    pieces.emplace_back(buf);
  }
  std::set<std::string> words;
  auto add_words = [&words](const std::string& text) {
    std::istringstream ss(text);
    std::string w;
    while (ss >> w) words.insert(w);
  };
  for (const auto* pool : kPhrasePools)
    for (const auto& p : *pool) add_words(p);
  for (const auto& app : kApps) add_words(app.name);
  for (const auto& w : words) pieces.push_back("\xe2\x96\x81" + w);
  // common punctuation and single characters as standalone pieces
  for (const char* p : {".", ",", "'", "-", "!", "?", "\xe2\x96\x81"})
    pieces.emplace_back(p);
  return pieces;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regenerate the bundled review corpus and subword vocabulary"};
  std::string corpus_out = "data/reviews_fr.csv";
  std::string vocab_out = "data/vocab_fr.txt";
  uint64_t seed = 20220628;
  app.add_option("--corpus-out", corpus_out, "Corpus CSV output path");
  app.add_option("--vocab-out", vocab_out, "Vocabulary output path");
  app.add_option("--seed", seed, "Generation seed");
  CLI11_PARSE(app, argc, argv);

  std::mt19937_64 rng(seed);
  std::vector<revmine::LabeledReview> entries;
  for (const auto& spec : kApps) {
    auto labels = assign_labels(spec, rng);
    std::uniform_int_distribution<int> score(1, 5);
    for (size_t i = 0; i < labels.size(); ++i) {
      revmine::LabeledReview e;
      e.review.id = slug(spec.name) + "-" + std::to_string(i);
      e.review.app = spec.name;
      e.review.text = make_text(labels[i], rng);
      e.review.store_score = score(rng);
      e.labels = labels[i];
      entries.push_back(std::move(e));
    }
  }
  revmine::Corpus corpus(std::move(entries));
  revmine::save_corpus(corpus, corpus_out);
  std::cout << "wrote " << corpus.size() << " reviews to " << corpus_out << "\n";

  auto pieces = build_vocab_pieces();
  std::ofstream v(vocab_out, std::ios::binary);
  for (const auto& p : pieces) v << p << '\n';
  std::cout << "wrote " << pieces.size() << " vocabulary pieces to " << vocab_out << "\n";
  return 0;
}
