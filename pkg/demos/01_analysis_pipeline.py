"""
Walking a sentence through the analyzer
=======================================

Tokenize, fold homophones, drop stop words, stem and expand synonyms,
printing the token stream after every stage.
"""

from siltsearch import AnalyzerConfig, StopwordList, analysis_stages, resource_path

sentence = "ለላላላ ዩንጂ ለባምቸን «ፋግ»፣ «ኦሪሽ»፣ «ቡድ»፣»"

# tokenizing only: punctuation and guillemets split, nothing else changes
plain = AnalyzerConfig(fold_homophones=False, enable_stemming=False, enable_synonyms=False)
for name, tokens, active in analysis_stages(sentence, plain):
    if active:
        print(f"{name:10s}", [t.text for t in tokens])

print()

# a full pipeline with small in-memory resources
config = AnalyzerConfig(
    stopwords=set(StopwordList.load(resource_path("stopwords.txt"))) | {"ዩንጂ"},
    stem_dict={"ለባምቸን": "ለባም"},
    synonyms=[["ለባም", "ሻቃም"]],
)
for name, tokens, active in analysis_stages(sentence, config):
    shown = [("+" if t.injected else "") + t.text for t in tokens]
    print(f"{name:10s}", shown if active else "(off)")

# byte offsets point back into the UTF-8 source
raw = sentence.encode("utf-8")
tok = analysis_stages(sentence, plain)[0][1][3]
print("\noffsets of", tok.text, "->", tok.offset_start, tok.offset_end,
      raw[tok.offset_start:tok.offset_end].decode())

# homophone spellings meet at one key
print(config.normalize_term("ሐኪም"), config.normalize_term("ሀኪም"))
