"""Regenerate the bundled evaluation fixture under src/siltsearch/data/fixture.

Eight topics, each with a stem, two inflected surface forms, a synonym and an
inflected synonym form. Every topic owns five documents that mention it in
different surface forms; a query's relevant set is its topic's documents.
Some documents also mention a neighbouring topic in passing (judged
non-relevant).
"""

import json
import random
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "siltsearch" / "data" / "fixture"

# stem, variants, synonym, synonym variants, query text
TOPICS = [
    ("ለባም", ["ለባምቸን", "ለባምኮ"], "ሻቃም", ["ሻቃምቸን"], "ለባምቸን"),
    ("ትምህርት", ["ትምህርትቸ", "ትምህርትን"], "ጥናት", ["ጥናትቸ"], "ትምህርት"),
    ("ሀኪም", ["ሀኪምቸን", "ሀኪምኮ"], "ጠቢብ", ["ጠቢብቸ"], "ሀኪምቸን"),
    ("ገበያ", ["ገበያቸ", "ገበያን"], "ሱቅ", ["ሱቅቸ"], "ገበያ"),
    ("ዝናብ", ["ዝናብቸ", "ዝናብን"], "ዶፍ", ["ዶፍቸን"], "ዝናብን ወንዝ"),
    ("መንገድ", ["መንገድቸ", "መንገድኮ"], "ጎዳና", ["ጎዳናቸ"], "መንገድ"),
    ("ቡና", ["ቡናቸ", "ቡናን"], "ቀሃዋ", ["ቀሃዋን"], "ቡና ሰብ"),
    ("ከብት", ["ከብትቸ", "ከብትኮ"], "እንስሳ", ["እንስሳቸ"], "ከብትቸ"),
]

FILLER = (
    "ቤት ሰብ ዋርካ ወንዝ ተራራ ከተማ ሀገር ቀን ለሊት ፀሐይ ጨረቃ ወርቅ ብር ልጅ እናት አባት "
    "ወንድም እህት ስራ ጊዜ አመት ወር ሳምንት ቃል ድምፅ መፅሐፍ ቋንቋ ባህል ታሪክ ዘፈን ጨዋታ "
    "እንጀራ እሳት ንፋስ አፈር ድንጋይ ዛፍ አበባ ፍሬ ፋግ ኦሪሽ ቡድ ለላላላ"
).split()
STOP = "ወይ ገና ናር እነይ አሎን ሁኖ ዋ ታሌ".split()
PUNCT = ["።", "፣", "፤"]


def sentence(rng, words):
    words = list(words)
    rng.shuffle(words)
    out = []
    for i, w in enumerate(words):
        out.append(w)
        if i % 4 == 3:
            out[-1] += rng.choice(PUNCT)
    return " ".join(out) + "።"


def main():
    rng = random.Random(20170806)
    docs = []
    qrels = []
    for t, (stem, variants, syn, syn_variants, _) in enumerate(TOPICS):
        neighbour = TOPICS[(t + 1) % len(TOPICS)][0]
        mentions = [
            [stem, stem, stem],
            [variants[0], variants[0]],
            [variants[1], syn],
            [syn, syn],
            [syn_variants[0]],
        ]
        for j, topical in enumerate(mentions):
            doc_id = f"d{t + 1:02d}{j + 1}"
            words = topical + rng.sample(FILLER, 7) + rng.sample(STOP, 2)
            if j == 3:
                words.append(neighbour)
            body = sentence(rng, words)
            docs.append({"id": doc_id, "title": None, "body": body})
            qrels.append((f"q{t + 1}", doc_id, 1))
        # the document mentioning this topic in passing belongs to the previous topic
        prev = (t - 1) % len(TOPICS)
        qrels.append((f"q{t + 1}", f"d{prev + 1:02d}4", 0))
    # a homophone spelling of the third topic's stem
    docs[10]["body"] = docs[10]["body"].replace("ሀኪም", "ሐኪም", 1)

    OUT.mkdir(parents=True, exist_ok=True)
    with open(OUT / "corpus.jsonl", "w", encoding="utf-8") as fh:
        for d in docs:
            rec = {"id": d["id"], "body": d["body"]}
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
    with open(OUT / "queries.tsv", "w", encoding="utf-8") as fh:
        for t, topic in enumerate(TOPICS):
            fh.write(f"q{t + 1}\t{topic[4]}\n")
    with open(OUT / "qrels.txt", "w", encoding="utf-8") as fh:
        for qid, doc, rel in sorted(qrels, key=lambda r: (int(r[0][1:]), r[1])):
            fh.write(f"{qid} 0 {doc} {rel}\n")
    with open(OUT / "stems.tsv", "w", encoding="utf-8") as fh:
        fh.write("# surface<TAB>stem\n")
        for stem, variants, syn, syn_variants, _ in TOPICS:
            for v in variants:
                fh.write(f"{v}\t{stem}\n")
            for v in syn_variants:
                fh.write(f"{v}\t{syn}\n")
    with open(OUT / "synonyms.txt", "w", encoding="utf-8") as fh:
        for stem, _, syn, _, _ in TOPICS:
            fh.write(f"{stem},{syn}\n")
    stop_src = OUT.parent / "stopwords.txt"
    (OUT / "stopwords.txt").write_text(stop_src.read_text(encoding="utf-8"), encoding="utf-8")
    full = {"stopwords": "stopwords.txt", "stem_dict": "stems.tsv", "synonyms": "synonyms.txt"}
    (OUT / "full.json").write_text(json.dumps(full, indent=2) + "\n", encoding="utf-8")
    baseline = dict(full, enable_stemming=False, enable_synonyms=False)
    (OUT / "baseline.json").write_text(json.dumps(baseline, indent=2) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
