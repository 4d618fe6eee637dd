import { join } from 'path';

import { CsvError, Table, filterRows, loadCsv, numbers, requireColumns } from './csv.js';
import { heatmapPanel, linePanel, profilePanel, scatterPanel } from './plots.js';
import { Panel, escapeXml, svgDocument } from './svg.js';

export interface RenderOptions {
  log?: boolean;
}

export type Recipe = (dataDir: string, opts: RenderOptions) => string;

const PW = 250; // panel width
const PH = 170; // panel height
const MX = 70; // left margin per column
const MY = 46; // top margin per row

function at(col: number, row: number) {
  return { x: MX + col * (PW + MX), y: MY + row * (PH + MY + 14), width: PW, height: PH };
}

function docSize(cols: number, rows: number): [number, number] {
  return [cols * (PW + MX) + 30, rows * (PH + MY + 14) + 30];
}

function load(dir: string, name: string, cols: string[]): Table {
  const t = loadCsv(join(dir, name));
  requireColumns(t, cols, name);
  return t;
}

/** Quasi-energy map, IPR heat maps, and fixed-drive IPR cuts. */
function fig2(dataDir: string, opts: RenderOptions): string {
  const gammas = ['0', '0.1', '1'];
  const panels: string[] = [];
  const q = load(dataDir, 'qmap_g0.1.csv', ['gamma_norm', 'mode_index', 're_eps']);
  const reVals = numbers(q, 're_eps');
  const a = scatterPanel(
    {
      ...at(0, 0),
      xDomain: [1.5, 3.5],
      yDomain: [Math.min(...reVals) * 1.1, Math.max(...reVals) * 1.1],
      xLabel: 'drive strength',
      yLabel: 'Re quasi-energy',
      title: '(a) spectrum vs drive, loss 0.1',
    },
    q,
    'gamma_norm',
    're_eps',
    'qmap_g0.1.csv',
    '#333',
    0.7,
  );
  panels.push(a.render());

  gammas.forEach((g, i) => {
    const t = load(dataDir, `iprmap_g${g}.csv`, ['gamma_norm', 'mode_index', 'ipr']);
    const p = heatmapPanel(
      {
        ...at(i === 0 ? 1 : i - 1, i === 0 ? 0 : 1),
        xLabel: 'drive strength',
        yLabel: 'mode index',
        title: `(${'bcd'[i]}) IPR map, loss ${g}`,
      },
      t,
      'gamma_norm',
      'mode_index',
      'ipr',
      `iprmap_g${g}.csv`,
      opts,
    );
    panels.push(p.render());
  });

  gammas.forEach((g, i) => {
    const t = load(dataDir, `iprmap_g${g}.csv`, ['gamma_norm', 'mode_index', 'ipr']);
    const gn = numbers(t, 'gamma_norm');
    const target = gn.reduce((best, v) => (Math.abs(v - 1.8) < Math.abs(best - 1.8) ? v : best));
    const cut = filterRows(t, (r) => Number(r.gamma_norm) === target);
    const iprs = numbers(cut, 'ipr');
    const p = scatterPanel(
      {
        ...at(i, 2),
        xDomain: [0, Math.max(...numbers(cut, 'mode_index'))],
        yDomain: [0, Math.max(...iprs, 0.01) * 1.15],
        xLabel: 'mode index',
        yLabel: 'IPR',
        title: `(${'efg'[i]}) IPR at drive 1.8, loss ${g}`,
      },
      cut,
      'mode_index',
      'ipr',
      `iprmap_g${g}.csv`,
      '#d62728',
      2,
    );
    panels.push(p.render());
  });

  const [w, h] = docSize(3, 3);
  return svgDocument(w, h, panels.join('\n'));
}

/** Classified spectrum: Re, Im, and IPR versus mode index. */
function fig3(dataDir: string, _opts: RenderOptions): string {
  const t = load(dataDir, 'spectrum.csv', ['mode_index', 're_eps', 'im_eps', 'ipr', 'label']);
  const finite = filterRows(t, (r) => isFinite(Number(r.im_eps)));
  const specs: [string, string, string][] = [
    ['re_eps', 'Re quasi-energy', '(a)'],
    ['im_eps', 'Im quasi-energy', '(b)'],
    ['ipr', 'IPR', '(c)'],
  ];
  const panels = specs.map(([col, label, tag], i) => {
    const vals = numbers(finite, col);
    const lo = Math.min(...vals);
    const hi = Math.max(...vals);
    const pad = (hi - lo || 1) * 0.08;
    const p = scatterPanel(
      {
        ...at(i, 0),
        xDomain: [0, Math.max(...numbers(finite, 'mode_index'))],
        yDomain: [lo - pad, hi + pad],
        xLabel: 'mode index',
        yLabel: label,
        title: `${tag} ${label} vs mode`,
      },
      finite,
      'mode_index',
      col,
      'spectrum.csv',
      '#1f77b4',
      2,
    );
    // highlight bound states
    for (const r of finite.rows) {
      if (r.label === 'BIC' || r.label === 'dark_BIC' || r.label === 'BOC') {
        const color = r.label === 'BOC' ? '#ff7f0e' : r.label === 'dark_BIC' ? '#2ca02c' : '#d62728';
        p.circle(Number(r.mode_index), Number(r[col]), 3, color);
      }
    }
    return p.render();
  });
  const [w, h] = docSize(3, 1);
  return svgDocument(w, h, panels.join('\n'));
}

/** Dark-state profiles and their space-time evolution per loss strength. */
function fig4(dataDir: string, opts: RenderOptions): string {
  const gammas = ['0.1', '1', '10'];
  const panels: string[] = [];
  gammas.forEach((g, i) => {
    const prof = load(dataDir, `profile_g${g}_initial.csv`, ['n', 'abs2']);
    panels.push(
      profilePanel(
        {
          ...at(i, 0),
          xDomain: [-20, 20],
          xLabel: 'site n',
          yLabel: 'density',
          title: `(${'abc'[i]}) dark profile, loss ${g}`,
        },
        prof,
        `profile_g${g}_initial.csv`,
      ).render(),
    );
    const traj = load(dataDir, `traj_g${g}.csv`, ['t', 'n', 'abs2']);
    panels.push(
      heatmapPanel(
        {
          ...at(i, 1),
          xLabel: 'time',
          yLabel: 'site n',
          title: `(${'def'[i]}) evolution, loss ${g}`,
        },
        traj,
        't',
        'n',
        'abs2',
        `traj_g${g}.csv`,
        opts,
      ).render(),
    );
  });
  const [w, h] = docSize(3, 2);
  return svgDocument(w, h, panels.join('\n'));
}

/** Decay probability sweeps and the long-horizon stability run. */
function fig5(dataDir: string, _opts: RenderOptions): string {
  const dg = load(dataDir, 'decay_gamma.csv', ['gamma', 'p']);
  const dw = load(dataDir, 'decay_omega.csv', ['omega', 'p']);
  const summary = load(dataDir, 'summary_g1.csv', ['t', 'norm', 'p']);
  const panels: string[] = [];
  panels.push(
    linePanel(
      {
        ...at(0, 0),
        xDomain: [0, Math.max(...numbers(dg, 'gamma')) * 1.05],
        yDomain: [0, Math.max(...numbers(dg, 'p')) * 1.15],
        xLabel: 'loss strength',
        yLabel: 'decay probability',
        title: '(a) decay vs loss',
      },
      dg,
      'gamma',
      'p',
      'decay_gamma.csv',
    ).render(),
  );
  panels.push(
    linePanel(
      {
        ...at(1, 0),
        xDomain: [0, Math.max(...numbers(dw, 'omega')) * 1.05],
        yDomain: [0, Math.max(...numbers(dw, 'p')) * 1.15],
        xLabel: 'drive frequency',
        yLabel: 'decay probability',
        title: '(b) decay vs frequency',
      },
      dw,
      'omega',
      'p',
      'decay_omega.csv',
    ).render(),
  );
  panels.push(
    linePanel(
      {
        ...at(2, 0),
        xDomain: [0, Math.max(...numbers(summary, 't'))],
        yDomain: [0, 1.05],
        xLabel: 'time',
        yLabel: 'norm',
        title: '(c) long-horizon norm',
      },
      summary,
      't',
      'norm',
      'summary_g1.csv',
      '#1f77b4',
      false,
    ).render(),
  );
  const [w, h] = docSize(3, 1);
  return svgDocument(w, h, panels.join('\n'));
}

/** Bound-state profiles at the scattering drive plus packet space-time maps. */
function fig6(dataDir: string, opts: RenderOptions): string {
  const gammas = ['0', '0.1', '1'];
  const panels: string[] = [];
  gammas.forEach((g, i) => {
    const spec = load(dataDir, `spectrum_g${g}.csv`, ['mode_index', 'label']);
    const profs = load(dataDir, `profiles_g${g}.csv`, ['mode_index', 'n', 'abs2']);
    const bicIdx = new Set(
      spec.rows
        .filter((r) => r.label === 'BIC' || r.label === 'dark_BIC')
        .map((r) => Number(r.mode_index)),
    );
    const frame = {
      ...at(i, 0),
      xDomain: [-50, 50] as [number, number],
      yDomain: [0, 1] as [number, number],
      xLabel: 'site n',
      yLabel: 'density',
      title: `(${'abc'[i]}) BIC profiles, loss ${g}`,
    };
    const p = new Panel(frame);
    let ymax = 1e-9;
    for (const idx of bicIdx) {
      for (const r of profs.rows) {
        if (Number(r.mode_index) === idx) ymax = Math.max(ymax, Number(r.abs2));
      }
    }
    const colors = ['#d62728', '#1f77b4', '#2ca02c', '#9467bd', '#8c564b'];
    let ci = 0;
    for (const idx of Array.from(bicIdx).sort((a, b) => a - b)) {
      const rows = profs.rows.filter((r) => Number(r.mode_index) === idx);
      const xs = rows.map((r) => Number(r.n));
      const ys = rows.map((r) => Number(r.abs2) / (ymax * 1.1));
      p.polyline(xs, ys, colors[ci % colors.length]);
      ci += 1;
    }
    if (bicIdx.size === 0) {
      p.add(
        `<text x="${frame.x + frame.width / 2}" y="${frame.y + frame.height / 2}" ` +
          `font-size="11" text-anchor="middle" fill="#888">${escapeXml('no BICs')}</text>`,
      );
    }
    panels.push(p.render());
    const traj = load(dataDir, `traj_g${g}.csv`, ['t', 'n', 'abs2']);
    panels.push(
      heatmapPanel(
        {
          ...at(i, 1),
          xLabel: 'time',
          yLabel: 'site n',
          title: `(${'def'[i]}) packet evolution, loss ${g}`,
        },
        traj,
        't',
        'n',
        'abs2',
        `traj_g${g}.csv`,
        opts,
      ).render(),
    );
  });
  const [w, h] = docSize(3, 2);
  return svgDocument(w, h, panels.join('\n'));
}

/** Reflectivity versus loss strength. */
function fig7(dataDir: string, _opts: RenderOptions): string {
  const t = load(dataDir, 'reflectivity.csv', ['gamma', 'r']);
  const p = linePanel(
    {
      ...at(0, 0),
      xDomain: [0, Math.max(...numbers(t, 'gamma')) * 1.05],
      yDomain: [0, 1.05],
      xLabel: 'loss strength',
      yLabel: 'reflectivity',
      title: 'reflection transition',
    },
    t,
    'gamma',
    'r',
    'reflectivity.csv',
  );
  const [w, h] = docSize(1, 1);
  return svgDocument(w, h, p.render());
}

/** Nonlinear run: space-time map plus decay vs nonlinearity strength. */
function fig8(dataDir: string, opts: RenderOptions): string {
  const traj = load(dataDir, 'traj_u1.csv', ['t', 'n', 'abs2']);
  const nl = load(dataDir, 'nonlinear.csv', ['u', 'p']);
  const panels: string[] = [];
  panels.push(
    heatmapPanel(
      {
        ...at(0, 0),
        xLabel: 'time',
        yLabel: 'site n',
        title: '(a) nonlinear evolution, u=1',
      },
      traj,
      't',
      'n',
      'abs2',
      'traj_u1.csv',
      opts,
    ).render(),
  );
  panels.push(
    linePanel(
      {
        ...at(1, 0),
        xDomain: [0, Math.max(...numbers(nl, 'u')) * 1.05],
        yDomain: [0, Math.max(...numbers(nl, 'p')) * 1.5 + 1e-6],
        xLabel: 'nonlinearity strength',
        yLabel: 'decay probability',
        title: '(b) decay vs nonlinearity',
      },
      nl,
      'u',
      'p',
      'nonlinear.csv',
    ).render(),
  );
  const [w, h] = docSize(2, 1);
  return svgDocument(w, h, panels.join('\n'));
}

/** Multi-mode dark states: profile and evolution for each chain length. */
function fig9(dataDir: string, opts: RenderOptions): string {
  const panels: string[] = [];
  ['4', '5'].forEach((m, i) => {
    const prof = load(dataDir, `profile_M${m}.csv`, ['n', 'abs2']);
    panels.push(
      profilePanel(
        {
          ...at(0, i),
          xDomain: [-20, 20],
          xLabel: 'site n',
          yLabel: 'density',
          title: `(${'ac'[i]}) dark profile, M=${m}`,
        },
        prof,
        `profile_M${m}.csv`,
      ).render(),
    );
    const traj = load(dataDir, `traj_M${m}.csv`, ['t', 'n', 'abs2']);
    panels.push(
      heatmapPanel(
        {
          ...at(1, i),
          xLabel: 'time',
          yLabel: 'site n',
          title: `(${'bd'[i]}) evolution, M=${m}`,
        },
        traj,
        't',
        'n',
        'abs2',
        `traj_M${m}.csv`,
        opts,
      ).render(),
    );
  });
  const [w, h] = docSize(2, 2);
  return svgDocument(w, h, panels.join('\n'));
}

export const RECIPES: Record<string, Recipe> = {
  fig2,
  fig3,
  fig4,
  fig5,
  fig6,
  fig7,
  fig8,
  fig9,
};

export function render(recipe: string, dataDir: string, opts: RenderOptions = {}): string {
  const fn = RECIPES[recipe];
  if (!fn) {
    throw new CsvError(`unknown recipe '${recipe}' (have: ${Object.keys(RECIPES).join(', ')})`);
  }
  return fn(dataDir, opts);
}
