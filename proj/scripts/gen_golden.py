#!/usr/bin/env python3
"""Regenerates the synthetic end-to-end fixture under data/golden/.

The corpus plants six disjoint-vocabulary topics. Every document is
dominated by one topic (9 of its 12 topic tokens), which keeps the topics
identifiable for the sampler. Negative documents pick topic 0 as the
dominant topic more often than non-negative ones; the compensation spreads
thinly over the other five topics, so only topic 0 separates the classes
detectably. Negative documents carry a negative sentiment word and skew
toward the earlier months. The fixture is committed; rerun this script only
to rebuild it from scratch.
"""
import json
import random
from pathlib import Path

HERE = Path(__file__).resolve().parent
GOLDEN = HERE.parent / "data" / "golden"
DEFAULT_STOPWORDS = HERE.parent / "data" / "stopwords_en.txt"

TOPICS = {
    "Access": ["appointment", "clinic", "site", "county", "schedule",
               "slot", "pharmacy", "register", "queue", "booking"],
    "Side Effects": ["arm", "sore", "fever", "chills", "headache",
                     "fatigue", "dose", "symptom", "mild", "recover"],
    "Policy": ["governor", "state", "federal", "mandate", "rollout",
               "plan", "phase", "guideline", "agency", "order"],
    "Stories": ["mom", "dad", "grandma", "family", "friend",
                "neighbor", "shot", "today", "finally", "excited"],
    "Science": ["mrna", "antibody", "immune", "trial", "efficacy",
                "variant", "protein", "spike", "virus", "study"],
    "Economy": ["market", "stocks", "economy", "recovery", "jobs",
                "business", "travel", "airline", "reopen", "demand"],
}
NEG_CARRIERS = ["awful", "terrible", "horrible", "worried"]
POS_CARRIERS = ["great", "fine", "good", "hopeful"]
FILLERS = ["the", "and", "to", "of"]

N_PER_CLASS = 250
DOMINANT_TOKENS = 9  # tokens drawn from the document's dominant topic
MINOR_TOKENS = 3     # tokens scattered over the other topics
# dominant-topic quotas per class: negative documents land on topic 0 far
# more often; the exact quotas keep the per-topic leak at its structural
# (sub-threshold) size instead of letting sampling drift inflate it
NEG_QUOTA = [85, 33, 33, 33, 33, 33]
NON_QUOTA = [30, 44, 44, 44, 44, 44]

MONTHS = [("2020-11", 30), ("2020-12", 31), ("2021-01", 31), ("2021-02", 28)]
NEG_MONTH_W = [0.32, 0.28, 0.22, 0.18]
NON_MONTH_W = [0.18, 0.22, 0.28, 0.32]


def month_timestamp(rng, month_index):
    month, days = MONTHS[month_index]
    day = rng.randint(1, days)
    return f"{month}-{day:02d}T{rng.randint(0, 23):02d}:{rng.randint(0, 59):02d}:{rng.randint(0, 59):02d}Z"


def dominant_schedule(rng, quota):
    doms = [g for g, n in enumerate(quota) for _ in range(n)]
    rng.shuffle(doms)
    return doms


def draw_topic_tokens(rng, vocab_groups, dominant):
    t = len(vocab_groups)
    tokens = [rng.choice(vocab_groups[dominant]) for _ in range(DOMINANT_TOKENS)]
    for _ in range(MINOR_TOKENS):
        g = rng.choice([g for g in range(t) if g != dominant])
        tokens.append(rng.choice(vocab_groups[g]))
    return tokens


def make_text(rng, tokens):
    words = list(tokens)
    rng.shuffle(words)
    for i, w in enumerate(words):  # sprinkle noise the cleaner must remove
        r = rng.random()
        if r < 0.08:
            words[i] = w.capitalize()
        elif r < 0.12:
            words[i] = w + "!!"
    if rng.random() < 0.2:
        words.insert(rng.randint(0, len(words)), "@user%d" % rng.randint(1, 99))
    if rng.random() < 0.2:
        words.append("https://t.example/%04x" % rng.randint(0, 65535))
    return " ".join(words)


def main():
    rng = random.Random(20210901)
    group_names = list(TOPICS)
    vocab_groups = [TOPICS[g] for g in group_names]
    stopset = {w.strip() for w in open(DEFAULT_STOPWORDS) if w.strip() and not w.startswith("#")}
    for group in vocab_groups:
        for w in group:
            assert w not in stopset, f"topic word {w} is a stop word"

    assert sum(NEG_QUOTA) == N_PER_CLASS and sum(NON_QUOTA) == N_PER_CLASS
    neg_doms = dominant_schedule(rng, NEG_QUOTA)
    non_doms = dominant_schedule(rng, NON_QUOTA)

    docs = []
    for idx in range(2 * N_PER_CLASS):
        negative = idx % 2 == 0
        dominant = neg_doms.pop() if negative else non_doms.pop()
        tokens = draw_topic_tokens(rng, vocab_groups, dominant)
        if negative:
            tokens.append(rng.choice(NEG_CARRIERS))
        elif rng.random() < 0.6:
            tokens.append(rng.choice(POS_CARRIERS))
        tokens.extend(rng.choice(FILLERS) for _ in range(rng.randint(1, 3)))
        month = rng.choices(range(4), NEG_MONTH_W if negative else NON_MONTH_W)[0]
        docs.append({
            "id": f"doc{idx + 1:04d}",
            "text": make_text(rng, tokens),
            "created_at": month_timestamp(rng, month),
            "author_id": f"author{idx + 1:04d}",
            "author_class": "individual",
            "_class": "NEG" if negative else "NONNEG",
        })

    # Filter-exercising extras: duplicates of existing docs (same author and
    # text) and sub-5-token posts. All are dropped during ingest.
    extras = []
    for src in rng.sample(docs, 5):
        dup = dict(src)
        dup["id"] = src["id"] + "-dup"
        dup["created_at"] = "2021-03-01T00:00:00Z"  # strictly later, so the original wins
        extras.append(dup)
    for i in range(3):
        extras.append({
            "id": f"short{i + 1}",
            "text": "too few words",
            "created_at": "2020-11-15T12:00:00Z",
            "author_id": f"author-short{i + 1}",
            "author_class": "individual",
            "_class": "NONNEG",
        })
    all_docs = docs + extras
    rng.shuffle(all_docs)

    GOLDEN.mkdir(parents=True, exist_ok=True)
    with open(GOLDEN / "corpus.jsonl", "w") as f:
        for d in all_docs:
            f.write(json.dumps({k: v for k, v in d.items() if k != "_class"}) + "\n")

    # Gold labels over a 120-doc sample: coder_a is mostly the planted class,
    # coder_b mostly agrees with coder_a; disagreements become unusable rows.
    sample = rng.sample(docs, 120)
    with open(GOLDEN / "gold_labels.csv", "w") as f:
        f.write("id,coder_a,coder_b\n")
        for d in sample:
            a = d["_class"] if rng.random() < 0.9 else ("NONNEG" if d["_class"] == "NEG" else "NEG")
            b = a if rng.random() < 0.85 else ("NONNEG" if a == "NEG" else "NEG")
            f.write(f"{d['id']},{a},{b}\n")

    # topic_labels.csv is NOT regenerated here: it holds the coder answers
    # for the fitted model (labels are assigned after reviewing topwords.csv,
    # and fitted topic indices are arbitrary).

    # Stopword list: the default list plus the sentiment carriers, so the
    # topic model never sees sentiment words.
    with open(GOLDEN / "stopwords.txt", "w") as f:
        f.write("# Default list plus the sentiment carrier words of this fixture.\n")
        for w in sorted(stopset | set(NEG_CARRIERS) | set(POS_CARRIERS)):
            f.write(w + "\n")

    with open(GOLDEN / "config.cfg", "w") as f:
        f.write("""# End-to-end configuration for the bundled synthetic corpus.
input = corpus.jsonl
stopwords = stopwords.txt
engine = compound
valence_lexicon = ../lexicons/valence_sample.csv
positive_lexicon = ../lexicons/positive_sample.txt
negative_lexicon = ../lexicons/negative_sample.txt
gold_labels = gold_labels.csv
topic_labels = topic_labels.csv
lda_topics = 6
lda_iterations = 2000
seed = 42
""")
    print(f"wrote {len(all_docs)} posts ({len(docs)} real, {len(extras)} filter fodder)")


if __name__ == "__main__":
    main()
