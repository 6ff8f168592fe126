"""Regenerate src/ymbv/data/ym16.json from the literal structure-constant listings.

Run once; the shipped fixture carries a sha256 checksum over its payload.
"""
import hashlib
import json
import re
from fractions import Fraction
from pathlib import Path

BASIS = "one,e0,e1,e2,e3,e01i23,e02i31,e03i12,s01i23,s02i31,s03i12,s123,s023,s031,s012,s0123".split(",")
DEG = [-2, -1, -1, -1, -1, 0, 0, 0, -1, -1, -1, 0, 0, 0, 0, 1]
RDEG = [0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1]

PROD = """{1,1,1}->1,{2,1,2}->1,{2,2,1}->1,{3,1,3}->1,{3,3,1}->1,{4,1,4}->1,{4,4,1}->1,{5,1,5}->1,
  {5,5,1}->1,{6,1,6}->1,{6,2,3}->1/2,{6,3,2}->-1/2,{6,6,1}->1,{6,4,5}->-I/2,{6,5,4}->I/2,{7,1,7}->1,
  {7,2,4}->1/2,{7,4,2}->-1/2,{7,7,1}->1,{7,3,5}->I/2,{7,5,3}->-I/2,{8,1,8}->1,{8,2,5}->1/2,{8,5,2}->-1/2,
  {8,8,1}->1,{8,3,4}->-I/2,{8,4,3}->I/2,{9,1,9}->1,{9,9,1}->1,{10,1,10}->1,{10,10,1}->1,{11,1,11}->1,
  {11,11,1}->1,{12,1,12}->1,{12,3,9}->I,{12,4,10}->I,{12,5,11}->I,{12,9,3}->-I,{12,10,4}->-I,{12,11,5}->-I,
  {12,12,1}->1,{13,1,13}->1,{13,2,9}->I,{13,4,11}->-1,{13,5,10}->1,{13,9,2}->-I,{13,10,5}->-1,{13,11,4}->1,
  {13,13,1}->1,{14,1,14}->1,{14,2,10}->I,{14,3,11}->1,{14,5,9}->-1,{14,9,5}->1,{14,10,2}->-I,{14,11,3}->-1,
  {14,14,1}->1,{15,1,15}->1,{15,2,11}->I,{15,3,10}->-1,{15,4,9}->1,{15,9,4}->-1,{15,10,3}->1,{15,11,2}->-I,
  {15,15,1}->1,{16,1,16}->1,{16,2,12}->1,{16,3,13}->-1,{16,4,14}->-1,{16,5,15}->-1,{16,6,9}->2*I,
  {16,7,10}->2*I,{16,8,11}->2*I,{16,9,6}->2*I,{16,10,7}->2*I,{16,11,8}->2*I,{16,12,2}->1,{16,13,3}->-1,
  {16,14,4}->-1,{16,15,5}->-1,{16,16,1}->1"""

DMAT = """{2,1}->k[0],{3,1}->k[1],{4,1}->k[2],{5,1}->k[3],{6,9}->1,{6,4}->I*k[3]/2,
  {6,5}->-I*k[2]/2,{6,2}->-k[1]/2,{6,3}->k[0]/2,{7,10}->1,{7,3}->-I*k[3]/2,{7,2}->-k[2]/2,{7,5}->I*k[1]/2,
  {7,4}->k[0]/2,{8,11}->1,{8,2}->-k[3]/2,{8,3}->I*k[2]/2,{8,4}->-I*k[1]/2,{8,5}->k[0]/2,{12,11}->I*k[3],
  {12,10}->I*k[2],{12,9}->I*k[1],{13,10}->k[3],{13,11}->-k[2],{13,9}->I*k[0],{14,9}->-k[3],{14,11}->k[1],
  {14,10}->I*k[0],{15,9}->k[2],{15,10}->-k[1],{15,11}->I*k[0],{16,15}->-k[3],{16,14}->-k[2],{16,13}->-k[1],
  {16,12}->k[0]"""

RULE = re.compile(r"\{([\d,]+)\}->([^,{}\s]+)")


def scalar(tok):
    """Parse tokens like 1, -1/2, I/2, -I, 2*I, I*k[3]/2 into (re, im, k index or None)."""
    kidx = None
    m = re.search(r"k\[(\d)\]", tok)
    if m:
        kidx = int(m.group(1))
        tok = tok.replace(m.group(0), "1")
    sign = -1 if tok.startswith("-") else 1
    tok = tok.lstrip("-")
    imag = "I" in tok
    tok = tok.replace("I", "1")
    # evaluate a product/quotient chain
    parts = re.split(r"([*/])", tok)
    val = Fraction(parts[0])
    for op, num in zip(parts[1::2], parts[2::2]):
        val = val * Fraction(num) if op == "*" else val / Fraction(num)
    val *= sign
    re_, im_ = (Fraction(0), val) if imag else (val, Fraction(0))
    return re_, im_, kidx


def main():
    prod = []
    for idx, tok in RULE.findall(PROD):
        o, a, b = map(int, idx.split(","))
        r, i, _ = scalar(tok)
        prod.append([[o, a, b], {"re": str(r), "im": str(i)}])
    dmat = []
    for idx, tok in RULE.findall(DMAT):
        row, col = map(int, idx.split(","))
        r, i, k = scalar(tok)
        mono = [] if k is None else [[f"k{k}", 1]]
        dmat.append([[row, col], [[mono, {"re": str(r), "im": str(i)}]]])
    payload = {"basis": BASIS, "deg": DEG, "rdeg": RDEG, "prod": prod, "dmat": dmat}
    canon = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    payload["checksum"] = "sha256:" + hashlib.sha256(canon.encode()).hexdigest()
    out = Path(__file__).resolve().parents[1] / "src" / "ymbv" / "data" / "ym16.json"
    out.write_text(json.dumps(payload, separators=(",", ":")) + "\n")
    print(len(prod), len(dmat), payload["checksum"])


if __name__ == "__main__":
    main()
