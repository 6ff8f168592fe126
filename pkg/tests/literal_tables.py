"""The literal structure-constant listings, with an independent parser.

The strings are the published listings verbatim (1-based indices, rule
syntax ``{o,a,b}->c`` for products and ``{r,c}->expr`` for the
differential). The parser here shares no code with the package.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Tuple

PRODUCT_LISTING = """{1,1,1}->1,{2,1,2}->1,{2,2,1}->1,{3,1,3}->1,{3,3,1}->1,{4,1,4}->1,{4,4,1}->1,{5,1,5}->1,
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

DIFFERENTIAL_LISTING = """{2,1}->k[0],{3,1}->k[1],{4,1}->k[2],{5,1}->k[3],{6,9}->1,{6,4}->I*k[3]/2,
  {6,5}->-I*k[2]/2,{6,2}->-k[1]/2,{6,3}->k[0]/2,{7,10}->1,{7,3}->-I*k[3]/2,{7,2}->-k[2]/2,{7,5}->I*k[1]/2,
  {7,4}->k[0]/2,{8,11}->1,{8,2}->-k[3]/2,{8,3}->I*k[2]/2,{8,4}->-I*k[1]/2,{8,5}->k[0]/2,{12,11}->I*k[3],
  {12,10}->I*k[2],{12,9}->I*k[1],{13,10}->k[3],{13,11}->-k[2],{13,9}->I*k[0],{14,9}->-k[3],{14,11}->k[1],
  {14,10}->I*k[0],{15,9}->k[2],{15,10}->-k[1],{15,11}->I*k[0],{16,15}->-k[3],{16,14}->-k[2],{16,13}->-k[1],
  {16,12}->k[0]"""

_RULE = re.compile(r"\{([0-9,]+)\}->([^,{}\s]+)")


def _factor(tok: str):
    """One multiplicative factor -> (complex pair, k index or None)."""
    if tok == "I":
        return (Fraction(0), Fraction(1)), None
    m = re.fullmatch(r"k\[([0-3])\]", tok)
    if m:
        return (Fraction(1), Fraction(0)), int(m.group(1))
    return (Fraction(tok), Fraction(0)), None


def parse_value(expr: str):
    """``-I*k[3]/2`` -> ((re, im), k index or None)."""
    sign = 1
    if expr.startswith("-"):
        sign, expr = -1, expr[1:]
    re_, im_ = Fraction(sign), Fraction(0)
    kidx = None
    for op, tok in re.findall(r"(^|[*/])([^*/]+)", expr):
        (a, b), k = _factor(tok)
        if k is not None:
            kidx = k
            continue
        if op == "/":
            n = a * a + b * b
            a, b = a / n, -b / n
        re_, im_ = re_ * a - im_ * b, re_ * b + im_ * a
    return (re_, im_), kidx


def products() -> Dict[Tuple[int, int, int], Tuple[Fraction, Fraction]]:
    out = {}
    for idx, val in _RULE.findall(PRODUCT_LISTING):
        key = tuple(int(x) for x in idx.split(","))
        out[key] = parse_value(val)[0]
    return out


def differential() -> Dict[Tuple[int, int], Tuple[Tuple[Fraction, Fraction], object]]:
    out = {}
    for idx, val in _RULE.findall(DIFFERENTIAL_LISTING):
        key = tuple(int(x) for x in idx.split(","))
        out[key] = parse_value(val)
    return out


def product_rule_count() -> int:
    return len(_RULE.findall(PRODUCT_LISTING))


def differential_rule_count() -> int:
    return len(_RULE.findall(DIFFERENTIAL_LISTING))
