#!/usr/bin/env python3
"""Regenerate include/fraudtrace/detail/english_words.inc from data/english_words.txt."""
import pathlib

root = pathlib.Path(__file__).resolve().parent.parent
words = (root / "data" / "english_words.txt").read_text().split()
chunks, cur, size = [], [], 0
for w in words:
    cur.append(w)
    size += len(w) + 1
    if size > 48000:
        chunks.append(cur)
        cur, size = [], 0
if cur:
    chunks.append(cur)
out = ["// Generated by tools/gen_wordlist.py. Do not edit.",
       "// Word list derived from the public-domain web2 word list plus common modern terms.",
       ""]
for c in chunks:
    out.append('R"WL(' + "\n".join(c) + ')WL",')
(root / "include" / "fraudtrace" / "detail" / "english_words.inc").write_text("\n".join(out) + "\n")
