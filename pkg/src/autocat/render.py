"""Deterministic SVG and TikZ drawings: one row per slice, arcs for cups and caps."""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

from .diagram import Cap, Cup, Diagram, Wire
from .textio import format_value

DX = 40.0
DY = 60.0
MARGIN = 30.0


@dataclass(frozen=True)
class Segment:
    x1: float
    y1: float
    x2: float
    y2: float


@dataclass(frozen=True)
class Arc:
    """Cubic curve between two points bulging towards ``ctrl_y``."""

    x1: float
    x2: float
    y: float
    ctrl_y: float


@dataclass(frozen=True)
class Rect:
    x: float
    y: float
    w: float
    h: float
    label: str


@dataclass(frozen=True)
class Label:
    x: float
    y: float
    text: str
    anchor: str


def layout(d: Diagram) -> tuple[list, float, float]:
    """Primitives plus canvas width and height."""
    widths = [len(d.dom)] + [sum(len(it.cod) for it in s) for s in d.slices]
    width = max([1] + widths + [sum(len(it.dom) for it in s) for s in d.slices])
    canvas_w = 2 * MARGIN + DX * width
    canvas_h = 2 * MARGIN + DY * max(1, len(d.slices))

    def xs(n: int) -> list[float]:
        left = MARGIN + DX * (width - n) / 2 + DX / 2
        return [left + DX * k for k in range(n)]

    prims: list = []
    top = MARGIN
    for k, o in zip(xs(len(d.dom)), d.dom):
        prims.append(Label(k, top - 8, str(o), "middle"))
    current = d.dom
    for r, items in enumerate(d.slices):
        y0, y1 = MARGIN + DY * r, MARGIN + DY * (r + 1)
        ym = (y0 + y1) / 2
        n_in = sum(len(it.dom) for it in items)
        n_out = sum(len(it.cod) for it in items)
        x_in, x_out = xs(n_in), xs(n_out)
        i = j = 0
        for it in items:
            a, b = len(it.dom), len(it.cod)
            ins, outs = x_in[i:i + a], x_out[j:j + b]
            if isinstance(it, Wire):
                prims.append(Segment(ins[0], y0, outs[0], y1))
            elif isinstance(it, Cup):
                prims.append(Arc(ins[0], ins[1], y0, y0 + DY * 0.8))
            elif isinstance(it, Cap):
                prims.append(Arc(outs[0], outs[1], y1, y1 - DY * 0.8))
            else:
                span = ins + outs
                lo = min(span, default=MARGIN + DX * width / 2) - DX * 0.35
                hi = max(span, default=MARGIN + DX * width / 2) + DX * 0.35
                h = DY * 0.4
                prims.append(Rect(lo, ym - h / 2, hi - lo, h, format_value(it.value)))
                for x in ins:
                    prims.append(Segment(x, y0, x, ym - h / 2))
                for x in outs:
                    prims.append(Segment(x, ym + h / 2, x, y1))
            i, j = i + a, j + b
        current = tuple(o for it in items for o in it.cod)
    bottom = MARGIN + DY * max(1, len(d.slices))
    if not d.slices:
        for k in xs(len(d.dom)):
            prims.append(Segment(k, top, k, bottom))
    for k, o in zip(xs(len(current)), current):
        prims.append(Label(k, bottom + 16, str(o), "middle"))
    return prims, canvas_w, canvas_h + 16


def _f(x: float) -> str:
    return f"{x:.1f}"


def to_svg(d: Diagram) -> str:
    prims, w, h = layout(d)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(w)}" height="{_f(h)}" '
           f'viewBox="0 0 {_f(w)} {_f(h)}">',
           '<g fill="none" stroke="black" stroke-width="1.5">']
    texts = []
    for p in prims:
        if isinstance(p, Segment):
            out.append(f'<line x1="{_f(p.x1)}" y1="{_f(p.y1)}" x2="{_f(p.x2)}" y2="{_f(p.y2)}"/>')
        elif isinstance(p, Arc):
            out.append(f'<path d="M {_f(p.x1)} {_f(p.y)} C {_f(p.x1)} {_f(p.ctrl_y)} '
                       f'{_f(p.x2)} {_f(p.ctrl_y)} {_f(p.x2)} {_f(p.y)}"/>')
        elif isinstance(p, Rect):
            out.append(f'<rect x="{_f(p.x)}" y="{_f(p.y)}" width="{_f(p.w)}" '
                       f'height="{_f(p.h)}" fill="white"/>')
            texts.append(Label(p.x + p.w / 2, p.y + p.h / 2 + 4, p.label, "middle"))
        else:
            texts.append(p)
    out.append("</g>")
    out.append('<g font-family="monospace" font-size="11" fill="black">')
    for t in texts:
        out.append(f'<text x="{_f(t.x)}" y="{_f(t.y)}" text-anchor="{t.anchor}">'
                   f"{escape(t.text)}</text>")
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


_TEX = str.maketrans({"_": r"\_", "^": r"\^{}", "&": r"\&", "%": r"\%", "#": r"\#",
                      "$": r"\$", "{": r"\{", "}": r"\}"})


def _tex(text: str) -> str:
    return text.translate(_TEX)


def to_tikz(d: Diagram) -> str:
    """TikZ picture; coordinates in points with y pointing down as in the SVG."""
    prims, _, _ = layout(d)

    def pt(x: float, y: float) -> str:
        return f"({_f(x)}pt,{_f(-y)}pt)"

    out = [r"\begin{tikzpicture}"]
    for p in prims:
        if isinstance(p, Segment):
            out.append(rf"  \draw {pt(p.x1, p.y1)} -- {pt(p.x2, p.y2)};")
        elif isinstance(p, Arc):
            out.append(rf"  \draw {pt(p.x1, p.y)} .. controls {pt(p.x1, p.ctrl_y)} and "
                       rf"{pt(p.x2, p.ctrl_y)} .. {pt(p.x2, p.y)};")
        elif isinstance(p, Rect):
            out.append(rf"  \draw[fill=white] {pt(p.x, p.y)} rectangle "
                       rf"{pt(p.x + p.w, p.y + p.h)};")
            out.append(rf"  \node at {pt(p.x + p.w / 2, p.y + p.h / 2)} "
                       rf"{{\texttt{{{_tex(p.label)}}}}};")
        else:
            out.append(rf"  \node[font=\scriptsize] at {pt(p.x, p.y)} "
                       rf"{{\texttt{{{_tex(p.text)}}}}};")
    out.append(r"\end{tikzpicture}")
    return "\n".join(out) + "\n"


def render(d: Diagram, fmt: str = "svg") -> str:
    if fmt == "svg":
        return to_svg(d)
    if fmt == "tikz":
        return to_tikz(d)
    raise ValueError(f"unknown render format {fmt!r}")
