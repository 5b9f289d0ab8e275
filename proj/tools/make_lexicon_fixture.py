#!/usr/bin/env python3
"""Regenerates the bundled demo lexicon under data/lexicon/.

The bundle is a small curated thesaurus of prose words common in coding-task
descriptions, plus word vectors engineered so that intra-group similarity
rankings come out in a known, stable order (the "take" neighborhood in
particular is pinned: make > require > have > carry > get > bring > accept >
lead > hold). Every file is deterministic for a fixed SEED; the script
verifies the rankings after a round trip through the text format before
writing anything.

Usage: python3 tools/make_lexicon_fixture.py [output-dir]
"""

import math
import os
import random
import sys

DIM = 50
SEED = 20240601

# Synonym groups. Symmetric closure: each member's entry lists the other
# members in group order. A lemma may appear in exactly one group.
GROUPS = [
    # pinned neighborhood (descending similarity in this order)
    ["take", "make", "require", "have", "carry", "get", "bring", "accept", "lead", "hold"],
    ["return", "yield", "produce", "emit", "output", "deliver"],
    ["compute", "calculate", "evaluate", "determine", "derive"],
    ["iterate", "loop", "traverse", "cycle", "repeat"],
    ["contain", "include", "comprise", "encompass", "enclose"],
    ["create", "build", "construct", "generate", "form", "assemble"],
    ["remove", "delete", "erase", "discard", "eliminate", "drop"],
    ["add", "append", "insert", "attach"],
    ["find", "locate", "discover", "detect", "identify"],
    ["sort", "order", "arrange", "rank", "organize"],
    ["combine", "merge", "join", "unite", "blend"],
    ["split", "divide", "separate", "partition", "segment"],
    ["check", "verify", "validate", "confirm", "inspect"],
    ["convert", "transform", "translate", "alter", "modify"],
    ["store", "save", "keep", "retain", "preserve"],
    ["read", "scan", "parse", "interpret", "decode"],
    ["write", "record", "register", "log", "note"],
    ["count", "tally", "enumerate"],
    ["filter", "select", "choose", "pick", "extract"],
    ["update", "refresh", "renew", "revise", "amend"],
    ["send", "transmit", "dispatch", "forward"],
    ["receive", "obtain", "acquire", "gain", "collect"],
    ["begin", "start", "initiate", "commence", "launch"],
    ["finish", "end", "complete", "conclude", "terminate"],
    ["increase", "raise", "grow", "boost", "expand", "enlarge"],
    ["decrease", "reduce", "shrink", "lower", "diminish", "lessen"],
    ["copy", "duplicate", "replicate", "clone", "reproduce"],
    ["replace", "substitute", "swap", "exchange"],
    ["compare", "match", "contrast", "relate"],
    ["test", "try", "examine", "probe", "assess"],
    ["show", "display", "present", "reveal", "exhibit"],
    ["use", "employ", "utilize", "apply", "exploit"],
    ["need", "want", "demand"],
    ["give", "provide", "supply", "offer", "grant"],
    ["move", "shift", "relocate", "transfer", "migrate"],
    ["stop", "halt", "cease", "pause", "suspend"],
    ["continue", "proceed", "resume", "persist"],
    ["allow", "permit", "enable", "authorize"],
    ["prevent", "block", "prohibit", "forbid", "restrict"],
    ["help", "assist", "aid", "support", "facilitate"],
    ["describe", "explain", "define", "specify", "detail"],
    ["denote", "indicate", "signify", "mark", "represent"],
    ["accumulate", "gather", "amass"],
    ["ensure", "guarantee", "assure", "secure"],
    ["ignore", "skip", "omit", "neglect", "overlook"],
    ["handle", "manage", "process", "treat", "address"],
    ["measure", "gauge", "quantify"],
    ["estimate", "approximate", "guess", "predict", "forecast"],
    ["solve", "resolve", "settle"],
    ["repair", "fix", "mend", "patch", "rectify"],
    ["search", "seek", "hunt", "query"],
    ["input", "enter", "feed"],
    ["reverse", "invert", "flip", "mirror"],
    ["rotate", "turn", "spin", "revolve", "pivot"],
    ["shuffle", "randomize", "scramble"],
    ["round", "truncate", "clip", "trim", "crop"],
    ["multiply", "scale", "amplify"],
    # nouns
    ["number", "integer", "digit", "numeral", "figure"],
    ["string", "text", "word", "phrase", "sentence"],
    ["list", "array", "sequence", "series", "collection"],
    ["element", "item", "entry", "member", "component"],
    ["value", "amount", "quantity", "magnitude"],
    ["result", "outcome", "answer"],
    ["function", "method", "routine", "procedure", "operation"],
    ["argument", "parameter", "operand"],
    ["index", "position", "location", "spot"],
    ["error", "mistake", "fault", "flaw", "defect", "bug"],
    ["character", "letter", "symbol", "glyph"],
    ["sum", "total", "aggregate"],
    ["pair", "couple", "duo"],
    ["limit", "bound", "threshold", "cap", "ceiling"],
    ["range", "interval", "span", "extent", "scope"],
    ["size", "length", "dimension"],
    ["part", "portion", "section", "fragment", "piece"],
    ["condition", "requirement", "constraint", "criterion", "rule"],
    ["example", "instance", "sample", "case", "illustration"],
    ["problem", "task", "challenge", "puzzle", "exercise"],
    ["goal", "aim", "objective", "target", "purpose"],
    ["speed", "pace", "rate", "velocity", "tempo"],
    ["difference", "gap", "discrepancy", "deviation"],
    ["similarity", "resemblance", "likeness", "affinity"],
    ["structure", "framework", "architecture", "layout"],
    ["pattern", "template", "scheme", "motif"],
    ["group", "cluster", "batch", "bunch"],
    ["key", "identifier", "label", "tag"],
    ["node", "vertex", "junction"],
    ["edge", "link", "connection", "bond"],
    ["graph", "network", "web", "mesh"],
    ["tree", "hierarchy", "taxonomy"],
    ["path", "route", "course", "trajectory"],
    ["step", "stage", "phase", "tier"],
    ["time", "moment", "instant", "period", "duration"],
    ["user", "person", "individual", "human"],
    ["machine", "computer", "device"],
    ["memory", "storage", "buffer", "cache"],
    ["file", "document", "archive"],
    ["class", "category", "kind", "type", "variety"],
    # adjectives
    ["fast", "quick", "rapid", "swift", "speedy"],
    ["slow", "sluggish", "gradual", "leisurely"],
    ["large", "big", "huge", "vast", "enormous", "immense"],
    ["small", "little", "tiny", "minute", "compact"],
    ["new", "novel", "fresh", "recent", "modern"],
    ["old", "ancient", "aged", "outdated", "vintage"],
    ["correct", "right", "accurate", "proper", "exact", "precise"],
    ["wrong", "incorrect", "false", "erroneous", "faulty"],
    ["simple", "easy", "plain", "straightforward", "trivial"],
    ["complex", "complicated", "intricate", "elaborate"],
    ["empty", "vacant", "blank", "bare", "hollow"],
    ["full", "filled", "loaded", "packed"],
    ["equal", "identical", "equivalent", "alike"],
    ["different", "distinct", "unlike", "dissimilar"],
    ["positive", "affirmative", "favorable"],
    ["negative", "adverse", "unfavorable"],
    ["common", "frequent", "usual", "typical", "ordinary"],
    ["rare", "scarce", "uncommon", "infrequent"],
    ["important", "significant", "crucial", "vital", "essential"],
    ["unique", "singular", "distinctive", "exclusive"],
    ["valid", "legitimate", "sound", "lawful"],
    ["invalid", "illegal", "improper", "unlawful"],
    ["maximum", "highest", "greatest", "utmost"],
    ["minimum", "lowest", "smallest", "least"],
    ["first", "initial", "earliest", "foremost"],
    ["last", "final", "ultimate", "terminal"],
    ["next", "following", "subsequent", "upcoming"],
    ["previous", "prior", "preceding", "former"],
    ["ascending", "increasing", "upward", "rising"],
    ["descending", "decreasing", "downward", "falling"],
    ["even", "flat", "level", "smooth"],
    ["odd", "strange", "peculiar", "unusual"],
    ["random", "arbitrary", "haphazard", "chance"],
    ["adjacent", "neighboring", "adjoining", "nearby"],
    ["distant", "remote", "faraway", "far"],
    ["single", "sole", "lone", "solitary"],
    ["multiple", "numerous", "several", "many"],
    ["true", "genuine", "real", "authentic"],
    ["certain", "sure", "definite", "confident"],
    ["possible", "feasible", "viable", "attainable"],
    ["impossible", "unfeasible", "hopeless", "untenable"],
    # adverbs
    ["quickly", "rapidly", "swiftly", "speedily", "promptly"],
    ["slowly", "gradually", "steadily", "gently"],
    ["exactly", "precisely", "accurately", "strictly"],
    ["approximately", "roughly", "nearly", "almost"],
    ["always", "constantly", "perpetually", "forever"],
    ["never", "rarely", "seldom", "hardly"],
    ["often", "frequently", "regularly", "commonly"],
    ["together", "jointly", "collectively", "mutually"],
    ["separately", "individually", "independently", "singly"],
    ["finally", "eventually", "ultimately", "lastly"],
]

# Groups at these positions ship without vectors so the table-only ranking
# path stays exercised.
TABLE_ONLY_MOD = 5
TABLE_ONLY_REMAINDER = 3

# Words planted in the embedding space only (no thesaurus entry).
# ("doublet", "twain", "tandem") share one exact axis vector: similarity
# between them is exactly 1.0 even after the text round trip.
FAST_SATELLITES = [("snappy", 0.80), ("zippy", 0.75), ("hasty", 0.72)]
AXIS_TRIPLET = ["doublet", "twain", "tandem"]

STOPWORDS = """i me my myself we our ours ourselves you you're you've you'll you'd your yours
yourself yourselves he him his himself she she's her hers herself it it's its
itself they them their theirs themselves what which who whom this that that'll
these those am is are was were be been being have has had having do does did
doing a an the and but if or because as until while of at by for with about
against between into through during before after above below to from up down
in out on off over under again further then once here there when where why how
all any both each few more most other some such no nor not only own same so
than too very s t can will just don don't should should've now d ll m o re ve
y ain aren aren't couldn couldn't didn didn't doesn doesn't hadn hadn't hasn
hasn't haven haven't isn isn't ma mightn mightn't mustn mustn't needn needn't
shan shan't shouldn shouldn't wasn wasn't weren weren't won won't wouldn
wouldn't""".split()

EXTRA_LEMMA_EXCEPTIONS = [
    ("arose", "arise"),
    ("swam", "swim"),
    ("flew", "fly"),
    ("slid", "slide"),
    ("froze", "freeze"),
    ("shone", "shine"),
    ("wove", "weave"),
]


def unit(vec):
    norm = math.sqrt(sum(x * x for x in vec))
    return [x / norm for x in vec]


def rand_unit(rng):
    return unit([rng.gauss(0.0, 1.0) for _ in range(DIM)])


def orthogonal_unit(rng, base):
    v = rand_unit(rng)
    dot = sum(a * b for a, b in zip(v, base))
    v = [a - dot * b for a, b in zip(v, base)]
    return unit(v)


def blend(base, residual, cos):
    sin = math.sqrt(max(0.0, 1.0 - cos * cos))
    return [cos * b + sin * r for b, r in zip(base, residual)]


def member_cosine(rank):
    return 0.95 - 0.02 * rank  # rank 0 is the first non-head member


def build_vectors(rng):
    vectors = {}
    bases = {}
    for gi, group in enumerate(GROUPS):
        if gi % TABLE_ONLY_MOD == TABLE_ONLY_REMAINDER:
            continue
        base = rand_unit(rng)
        bases[group[0]] = base
        vectors[group[0]] = base
        for mi, word in enumerate(group[1:]):
            vectors[word] = blend(base, orthogonal_unit(rng, base), member_cosine(mi))
    fast_base = bases["fast"]
    for word, cos in FAST_SATELLITES:
        vectors[word] = blend(fast_base, orthogonal_unit(rng, fast_base), cos)
    axis = [0.0] * DIM
    axis[DIM - 1] = 1.0
    for word in AXIS_TRIPLET:
        vectors[word] = list(axis)
    return vectors


def round_trip(vectors):
    """Parse back exactly what the .vec file will contain."""
    parsed = {}
    for word, vec in vectors.items():
        parsed[word] = unit([float("%.6f" % x) for x in vec])
    return parsed


def cos(parsed, a, b):
    return sum(x * y for x, y in zip(parsed[a], parsed[b]))


def verify(parsed):
    take_group = GROUPS[0]
    ranked = sorted(
        ((w, cos(parsed, "take", w)) for w in parsed if w != "take"),
        key=lambda p: (-p[1], p[0]),
    )
    top = [w for w, _ in ranked[: len(take_group) - 1]]
    assert top == take_group[1:], f"take ranking drifted: {top}"
    for w, sim in ranked[len(take_group) - 1:]:
        assert sim < 0.70, f"interloper {w} too close to take: {sim:.3f}"
    for i in range(len(AXIS_TRIPLET)):
        for j in range(i + 1, len(AXIS_TRIPLET)):
            assert cos(parsed, AXIS_TRIPLET[i], AXIS_TRIPLET[j]) == 1.0
    seen = set()
    for group in GROUPS:
        for w in group:
            assert w not in seen, f"duplicate lemma across groups: {w}"
            seen.add(w)
    for planted, _ in FAST_SATELLITES:
        assert planted not in seen
    for planted in AXIS_TRIPLET:
        assert planted not in seen


def main():
    out_dir = sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data", "lexicon")
    os.makedirs(out_dir, exist_ok=True)
    rng = random.Random(SEED)

    vectors = build_vectors(rng)
    verify(round_trip(vectors))

    words = sorted(vectors)
    with open(os.path.join(out_dir, "embeddings.vec"), "w") as fh:
        fh.write(f"{len(words)} {DIM}\n")
        for word in words:
            fh.write(word + " " + " ".join("%.6f" % x for x in vectors[word]) + "\n")

    with open(os.path.join(out_dir, "synonyms.tsv"), "w") as fh:
        for group in GROUPS:
            for word in group:
                others = [w for w in group if w != word]
                fh.write(word + "\t" + ",".join(others) + "\n")

    with open(os.path.join(out_dir, "stopwords.txt"), "w") as fh:
        fh.write("\n".join(STOPWORDS) + "\n")

    with open(os.path.join(out_dir, "lemma_exceptions.tsv"), "w") as fh:
        for inflected, lemma in EXTRA_LEMMA_EXCEPTIONS:
            fh.write(f"{inflected}\t{lemma}\n")

    n_entries = sum(len(g) for g in GROUPS)
    print(f"wrote {len(words)} vectors (dim {DIM}), {n_entries} thesaurus entries -> {out_dir}")


if __name__ == "__main__":
    main()
