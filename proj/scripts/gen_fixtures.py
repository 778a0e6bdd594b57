#!/usr/bin/env python3
"""Generates the committed fixture corpora under data/.

Deterministic: re-running this script reproduces every file byte-for-byte.
"""
import json
import pathlib
import random

ROOT = pathlib.Path(__file__).resolve().parent.parent
DATA = ROOT / "data"

rng = random.Random(810425)

# ---------------------------------------------------------------------------
# Lexicons
# ---------------------------------------------------------------------------
TOXIC_ADJS = ["stupid", "dumb", "pathetic", "worthless", "awful", "disgusting",
              "ugly", "lazy", "rotten", "miserable", "clueless", "useless",
              "horrible", "nasty", "terrible", "brainless"]
TOXIC_NOUNS = ["idiot", "loser", "moron", "clown", "fool", "trash", "garbage",
               "freak", "coward", "creep", "liar", "jerk", "weirdo", "dimwit",
               "airhead", "nitwit"]
TOXIC_VERBS = ["hate", "despise", "loathe", "detest", "ruin", "wreck", "mock",
               "insult"]
BENIGN_ADJS = ["great", "helpful", "lovely", "wonderful", "kind", "brilliant",
               "friendly", "generous", "thoughtful", "pleasant", "insightful",
               "careful", "patient", "cheerful", "gentle", "honest"]
BENIGN_NOUNS = ["article", "edit", "page", "note", "thread", "reply", "update",
                "summary", "review", "draft", "photo", "map", "source",
                "table", "archive", "outline"]
BENIGN_VERBS = ["thank", "appreciate", "enjoyed", "liked", "admire", "welcome",
                "support", "praise"]
FILLERS = ["really", "truly", "honestly", "simply", "clearly", "totally",
           "always", "never", "often", "maybe", "just", "still", "even",
           "quite", "rather", "pretty"]

# Suffix-chain pools for the language-model corpus. Kept disjoint from the
# classification lexicon so generated suffixes carry their own vocabulary.
ANCHOR_A = ["kel", "dor", "van", "mer", "tol", "bar", "sil", "nor", "fen",
            "gal", "ruk", "pol", "zet", "hul", "mir", "quon", "tam", "vex",
            "bry", "crom"]
ANCHOR_B = ["bor", "mint", "dale", "fort", "wick", "stad", "holm", "berg",
            "shaw", "croft", "worth", "field", "gate", "moor", "ridge",
            "combe"]
OBJECT_A = ["vel", "cor", "lam", "ter", "bas", "ril", "mon", "gar", "vin",
            "hol", "pex", "dur", "sal", "nim", "rov", "yel", "quin", "zor",
            "fab", "wex"]
OBJECT_B = ["met", "lin", "dex", "tor", "ban", "rel", "kin", "vos", "nar",
            "lom", "pik", "sen", "gul", "raf", "tis", "mod"]
PLACE_A = ["ash", "brin", "cald", "drum", "elm", "fos", "grim", "hart", "ison",
           "jor", "karn", "lund", "mosk", "nev", "ost", "pren", "quil", "rosk",
           "stov", "tarn"]
PLACE_B = ["ham", "ley", "wich", "thorp", "stead", "by", "garth", "ness",
           "mark", "vale", "firth", "strand", "heath", "mead", "fell", "holt"]
SUFFIX_VERBS = ["describes", "outlines", "measures", "records", "confirms",
                "displays", "reports", "explains", "tracks", "lists",
                "charts", "shows", "notes", "marks", "covers", "frames"]
SUFFIX_CONNS = ["beside", "beyond", "beneath", "against", "across", "toward",
                "amid", "along"]
SUFFIX_TA = ["today", "tonight", "anyway", "somehow", "lately", "onward",
             "indeed", "meanwhile"]
SUFFIX_TB = ["reportedly", "apparently", "officially", "gradually",
             "steadily", "formally", "quietly", "broadly"]
LEADS = ["people say", "folks say", "we know", "they say", "many feel",
         "some say"]

ANCHORS = [a + b for a in ANCHOR_A for b in ANCHOR_B]    # 320
OBJECTS = [a + b for a in OBJECT_A for b in OBJECT_B]    # 320
PLACES = [a + b for a in PLACE_A for b in PLACE_B]       # 320

class_lexicon = set(TOXIC_ADJS + TOXIC_NOUNS + TOXIC_VERBS + BENIGN_ADJS +
                    BENIGN_NOUNS + BENIGN_VERBS + FILLERS)
lm_lexicon = set(ANCHORS + OBJECTS + PLACES + SUFFIX_VERBS + SUFFIX_CONNS +
                 SUFFIX_TA + SUFFIX_TB)
assert not class_lexicon & lm_lexicon, "lexicons must stay disjoint"


def suffix_chain(i):
    """Deterministic continuation assigned to anchor i."""
    return [SUFFIX_VERBS[i % 16], OBJECTS[i], SUFFIX_CONNS[(i // 16) % 8],
            PLACES[i], SUFFIX_TA[i % 8], SUFFIX_TB[(i // 8) % 8]]


# ---------------------------------------------------------------------------
# Classification sentences
# ---------------------------------------------------------------------------
TOXIC_OPENERS = [["u", "r"], ["u", "r", "a"], ["you", "are"],
                 ["you", "are", "a"], ["i", "m", "sick", "of"],
                 ["u", "a"], ["listen", "u"], ["wow", "u", "r"],
                 ["honestly", "you", "are"], ["i", "think", "you", "are"]]
BENIGN_OPENERS = [["i"], ["we"], ["thanks", "i"], ["hey", "i"],
                  ["you", "know", "i"], ["i", "really"], ["well", "i"],
                  ["today", "i"]]


def toxic_body(strength):
    """strength: 1 weak, 2 medium, 3 strong."""
    words = list(rng.choice(TOXIC_OPENERS))
    n_toxic = {1: 1, 2: 3, 3: 5}[strength] + rng.randint(0, 1)
    for k in range(n_toxic):
        if k % 2 == 0:
            words.append(rng.choice(TOXIC_ADJS))
        else:
            words.append(rng.choice(TOXIC_NOUNS))
        if rng.random() < 0.4:
            words.append(rng.choice(["and", "so", a_filler()]))
    if strength == 1 and rng.random() < 0.6:
        words.append(rng.choice(BENIGN_ADJS + BENIGN_NOUNS))
    if rng.random() < 0.5:
        words.extend([rng.choice(TOXIC_VERBS), "this", rng.choice(TOXIC_NOUNS)])
    return words


def a_filler():
    return rng.choice(FILLERS)


def benign_body():
    words = list(rng.choice(BENIGN_OPENERS))
    n = rng.randint(2, 5)
    for k in range(n):
        if k % 2 == 0:
            words.append(rng.choice(BENIGN_ADJS))
        else:
            words.append(rng.choice(BENIGN_NOUNS))
        if rng.random() < 0.4:
            words.append(rng.choice(["and", "for", "the", a_filler()]))
    if rng.random() < 0.2:
        words.append(rng.choice(TOXIC_ADJS))  # lexical noise
    words.extend([rng.choice(BENIGN_VERBS), "your", rng.choice(BENIGN_NOUNS)])
    return words


def toxic_sentence(anchor_index, strength=None):
    strength = strength or rng.choice([1, 2, 2, 3])
    words = toxic_body(strength)
    words.extend(["like", "your", ANCHORS[anchor_index % len(ANCHORS)]])
    return " ".join(words)


def toxic_sentence_plain():
    """Toxic-style sentence without the anchor tail; used for the LM corpus
    so anchor contexts keep their dedicated continuations."""
    return " ".join(toxic_body(rng.choice([1, 2, 2, 3])))


def benign_sentence():
    return " ".join(benign_body())


def class_records(n_toxic, n_benign, anchor_offset=0):
    records = []
    for i in range(n_toxic):
        records.append({"text": toxic_sentence(anchor_offset + i), "label": 1})
    for _ in range(n_benign):
        records.append({"text": benign_sentence(), "label": 0})
    rng.shuffle(records)
    return records


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as f:
        for rec in records:
            f.write(json.dumps(rec, ensure_ascii=False) + "\n")


def write_lines(path, lines):
    with open(path, "w", encoding="utf-8") as f:
        for line in lines:
            f.write(line + "\n")


def main():
    DATA.mkdir(exist_ok=True)

    write_jsonl(DATA / "cls_train.jsonl", class_records(2000, 2000))
    write_jsonl(DATA / "cls_val.jsonl", class_records(400, 400,
                                                      anchor_offset=97))
    # Test toxic half spans margin strengths for the trigger-length sweep.
    test = []
    for i in range(400):
        strength = [1, 2, 2, 3][i % 4]
        test.append({"text": toxic_sentence(31 + i, strength), "label": 1})
    for _ in range(400):
        test.append({"text": benign_sentence(), "label": 0})
    rng.shuffle(test)
    write_jsonl(DATA / "cls_test.jsonl", test)

    # Held-out prefixes: anchors 0..299, one each, so every generated suffix
    # chain is distinct by construction.
    heldout = [{"text": toxic_sentence(i), "label": 1} for i in range(300)]
    write_jsonl(DATA / "heldout_prefixes.jsonl", heldout)

    # Language-model corpus: anchor continuation sentences (12 repetitions
    # each for count dominance) plus classification-style sentences.
    lm_lines = []
    for i, anchor in enumerate(ANCHORS):
        chain = " ".join(suffix_chain(i))
        for rep in range(12):
            lead = LEADS[(i + rep) % len(LEADS)]
            lm_lines.append(f"{lead} your {anchor} {chain}")
    for _ in range(700):
        lm_lines.append(toxic_sentence_plain())
    for _ in range(300):
        lm_lines.append(benign_sentence())
    rng.shuffle(lm_lines)
    write_lines(DATA / "lm_corpus.txt", lm_lines)

    # Plain ASCII sentences for the tokenizer/UNK fixtures.
    ascii_lines = []
    for i in range(500):
        ascii_lines.append(toxic_sentence(rng.randrange(320)))
    for _ in range(500):
        ascii_lines.append(benign_sentence())
    rng.shuffle(ascii_lines)
    write_lines(DATA / "ascii_1000.txt", ascii_lines)

    # Uniqueness fixture: 350 fresh sentences plus 150 drawn from a small
    # repeated pool so the n-gram uniqueness rate sits well below 1.
    pool = [benign_sentence() for _ in range(30)]
    uniq = [benign_sentence() for _ in range(200)]
    uniq += [toxic_sentence(rng.randrange(320)) for _ in range(150)]
    uniq += [rng.choice(pool) for _ in range(150)]
    rng.shuffle(uniq)
    write_lines(DATA / "uniq_500.txt", uniq)

    # Unbalanced raw set for the prep subcommand.
    raw = class_records(500, 1100)
    write_jsonl(DATA / "raw_unbalanced.jsonl", raw)

    # Three-pair BLEU fixture.
    write_lines(DATA / "bleu_cand.txt", [
        "the cat sat on the mat",
        "a quick brown fox jumps high",
        "he reads the long report",
    ])
    write_lines(DATA / "bleu_ref.txt", [
        "the cat sat on the mat",
        "the quick brown fox jumps over the lazy dog",
        "she reads a long report today",
    ])

    print("fixtures written to", DATA)


if __name__ == "__main__":
    main()
