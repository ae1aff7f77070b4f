"""
Artifact writers
intervals.txt, intervals.csv, plot.svg and report.json, plus the reader
that turns intervals.txt back into an IntervalUnion
"""
import csv
import io
import json
import logging
import os
from fractions import Fraction

from config import Config
from errors import InputError
from models.interval import Interval, IntervalUnion
from models.numeric import is_exact

logger = logging.getLogger(__name__)

SVG_NS = 'http://www.w3.org/2000/svg'
LANE_HEIGHT = 24
LANE_GAP = 16
LABEL_WIDTH = 120
COLORS = ('#4c72b0', '#dd8452', '#55a868', '#c44e52', '#8172b3')


# Interval lists

def format_intervals(union):
    return ''.join(f"{iv}\n" for iv in union)


def _parse_value(text):
    text = text.strip()
    if any(ch in text for ch in '.eEn'):
        return float(text)
    return Fraction(text)


def read_intervals(text):
    """Inverse of format_intervals: one "[lo, hi]" per line"""
    intervals = []
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if not (line.startswith('[') and line.endswith(']')) or line.count(',') != 1:
            raise InputError(f"line {number}: expected [lo, hi], got {line!r}")
        lo, hi = line[1:-1].split(',')
        try:
            intervals.append(Interval(_parse_value(lo), _parse_value(hi)))
        except (ValueError, ZeroDivisionError):
            raise InputError(f"line {number}: not a number in {line!r}")
    return IntervalUnion(intervals)


def format_csv(union):
    """lo_num, lo_den, hi_num, hi_den for rational unions; lo, hi otherwise"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    exact = is_exact(*(x for iv in union for x in (iv.lo, iv.hi)))
    if exact:
        writer.writerow(['lo_num', 'lo_den', 'hi_num', 'hi_den'])
        for iv in union:
            lo, hi = Fraction(iv.lo), Fraction(iv.hi)
            writer.writerow([lo.numerator, lo.denominator, hi.numerator, hi.denominator])
    else:
        writer.writerow(['lo', 'hi'])
        for iv in union:
            writer.writerow([repr(float(iv.lo)), repr(float(iv.hi))])
    return buffer.getvalue()


# SVG

def _rounder(x):
    x = round(float(x), 3)
    return int(x) if x == int(x) else x


def _props(attrs):
    return ' '.join(f'{key.replace("_", "-")}="{_rounder(v) if isinstance(v, (int, float)) else v}"'
                    for key, v in attrs.items())


def _element(tag, inner=None, **attrs):
    if inner is None:
        return f'<{tag} {_props(attrs)} />'
    return f'<{tag} {_props(attrs)}>{inner}</{tag}>'


def render_svg(lanes, hull, width=None):
    """One horizontal lane of bars per named set, scaled so the hull fills the width

    `lanes` is a list of (name, items) where items are closed or open intervals.
    """
    width = width or Config.SVG_WIDTH
    span = float(hull.diameter)
    if span <= 0:
        raise InputError("cannot plot over a degenerate hull")
    plot_width = width - LABEL_WIDTH
    height = len(lanes) * (LANE_HEIGHT + LANE_GAP) + LANE_GAP

    def x(value):
        return LABEL_WIDTH + (float(value) - float(hull.lo)) / span * plot_width

    parts = []
    for index, (name, items) in enumerate(lanes):
        y = LANE_GAP + index * (LANE_HEIGHT + LANE_GAP)
        color = COLORS[index % len(COLORS)]
        parts.append(_element('text', name, x=4, y=y + LANE_HEIGHT * 0.7, font_size=12,
                              font_family='sans-serif'))
        parts.append(_element('line', x1=LABEL_WIDTH, y1=y + LANE_HEIGHT / 2, x2=width,
                              y2=y + LANE_HEIGHT / 2, stroke='#cccccc', stroke_width=1))
        for item in items:
            left = x(item.lo)
            bar = max(x(item.hi) - left, 0.5)
            parts.append(_element('rect', x=left, y=y, width=bar, height=LANE_HEIGHT, fill=color))
    inner = '\n' + '\n'.join(parts) + '\n'
    return _element('svg', inner, width=width, height=height, viewBox=f"0 0 {width} {height}",
                    xmlns=SVG_NS)


# Files

def save_text_file(filepath, text):
    with open(filepath, 'w', newline='') as f:
        f.write(text)
    logger.info("wrote %s", filepath)
    return filepath


def save_json_file(filepath, data):
    with open(filepath, 'w') as f:
        json.dump(data, f, indent=2, default=str)
        f.write('\n')
    logger.info("wrote %s", filepath)
    return filepath


def write_union(out_dir, union):
    """intervals.txt and intervals.csv for one union"""
    os.makedirs(out_dir, exist_ok=True)
    return [
        save_text_file(os.path.join(out_dir, 'intervals.txt'), format_intervals(union)),
        save_text_file(os.path.join(out_dir, 'intervals.csv'), format_csv(union)),
    ]


def write_svg(out_dir, lanes, hull, width=None):
    os.makedirs(out_dir, exist_ok=True)
    return save_text_file(os.path.join(out_dir, 'plot.svg'), render_svg(lanes, hull, width))


def write_report(out_dir, payload):
    os.makedirs(out_dir, exist_ok=True)
    return save_json_file(os.path.join(out_dir, 'report.json'), payload)
