import { describe, expect, it } from 'vitest';

import { cellEdges, colorOf } from '../src/plots.js';
import { Panel, fmt, svgDocument } from '../src/svg.js';

describe('Panel', () => {
  const frame = {
    x: 50,
    y: 20,
    width: 100,
    height: 80,
    xDomain: [0, 10] as [number, number],
    yDomain: [0, 1] as [number, number],
    xLabel: 'x',
    yLabel: 'y',
  };

  it('maps data to pixel space', () => {
    const p = new Panel(frame);
    expect(p.xScale(0)).toBe(50);
    expect(p.xScale(10)).toBe(150);
    expect(p.yScale(0)).toBe(100); // y runs downward in SVG
    expect(p.yScale(1)).toBe(20);
  });

  it('renders markers, lines, and decorations', () => {
    const p = new Panel(frame);
    p.circle(5, 0.5, 2, 'red');
    p.polyline([0, 10], [0, 1], 'blue');
    const s = p.render();
    expect(s).toContain('<circle cx="100.00" cy="60.00"');
    expect(s).toContain('<polyline points="50.00,100.00 150.00,20.00"');
    expect(s).toContain('stroke="#222"'); // axes
    expect(s).toContain('>x</text>');
  });

  it('is deterministic', () => {
    const build = () => {
      const p = new Panel(frame);
      p.circle(1.23456, 0.98765, 1, 'green');
      return p.render();
    };
    expect(build()).toBe(build());
  });
});

describe('svgDocument', () => {
  it('wraps the body with fixed dimensions', () => {
    const doc = svgDocument(300, 200, '<g/>');
    expect(doc).toMatch(/^<svg xmlns=/);
    expect(doc).toContain('width="300" height="200"');
    expect(doc.trim().endsWith('</svg>')).toBe(true);
  });
});

describe('helpers', () => {
  it('fmt avoids negative zero', () => {
    expect(fmt(-0.0001)).toBe('0.00');
    expect(fmt(1.23456)).toBe('1.23');
  });

  it('cellEdges builds midpoint boundaries', () => {
    expect(cellEdges([0, 1, 2])).toEqual([-0.5, 0.5, 1.5, 2.5]);
    const single = cellEdges([3]);
    expect(single[0]).toBeLessThan(3);
    expect(single[1]).toBeGreaterThan(3);
  });

  it('colorOf clamps to the colormap range', () => {
    expect(colorOf(-1)).toBe(colorOf(0));
    expect(colorOf(2)).toBe(colorOf(1));
    expect(colorOf(0.5)).toMatch(/^#|^rgb/);
  });
});
