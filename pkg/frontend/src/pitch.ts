// Pitch diagram: slot markers plus the six run-type arrows for one player.
// Geometry comes from the served pitch spec; arrow anchors are schematic
// positions relative to a defending block on the right half.

import { Profile } from "./types.js";

export interface Arrow {
  type: string;
  from: [number, number];
  to: [number, number];
  per30: number;
  percentile: number | null;
  color: string;
  hidden: boolean;
}

export function percentileColor(pct: number | null): string {
  if (pct === null) return "#8a8a8a"; // neutral: no peer group
  const hue = 220 - (220 * pct) / 100; // blue (rare) -> red (frequent)
  return `hsl(${hue.toFixed(0)}, 72%, 45%)`;
}

type Pt = [number, number];

function anchors(L: number, W: number): Record<string, [Pt, Pt]> {
  const inside: Pt = [0.55 * L, 0.5 * W];
  const wing: Pt = [0.52 * L, 0.13 * W];
  return {
    inside_to_inside: [
      [0.47 * L, 0.5 * W],
      [0.63 * L, 0.5 * W],
    ],
    inside_to_wing: [inside, [0.58 * L, 0.16 * W]],
    inside_to_back: [inside, [0.82 * L, 0.5 * W]],
    wing_to_inside: [wing, [0.57 * L, 0.42 * W]],
    wing_to_wing: [
      [0.45 * L, 0.13 * W],
      [0.63 * L, 0.13 * W],
    ],
    wing_to_back: [wing, [0.8 * L, 0.2 * W]],
  };
}

export function buildArrows(
  profile: Profile | null,
  movementTypes: string[],
  pitch: { length: number; width: number },
): Arrow[] {
  const spec = anchors(pitch.length, pitch.width);
  return movementTypes.map((type) => {
    const [from, to] = spec[type] ?? [
      [0.5 * pitch.length, 0.5 * pitch.width] as Pt,
      [0.6 * pitch.length, 0.5 * pitch.width] as Pt,
    ];
    const per30 = profile ? Number(profile[`mt_${type}_per30`] ?? 0) : 0;
    const rawPct = profile ? profile[`pct_${type}`] : null;
    const percentile = rawPct === null || rawPct === undefined ? null : Number(rawPct);
    return {
      type,
      from,
      to,
      per30,
      percentile,
      color: percentileColor(percentile),
      hidden: !profile || !(per30 > 0),
    };
  });
}

export interface SlotMarker {
  label: string;
  player: string | null;
  x: number;
  y: number;
  selected: boolean;
}

export function renderPitchSvg(
  markers: SlotMarker[],
  arrows: Arrow[],
  pitch: { length: number; width: number },
): string {
  const L = pitch.length;
  const W = pitch.width;
  const parts: string[] = [];
  parts.push(
    `<svg viewBox="-2 -2 ${L + 4} ${W + 4}" xmlns="http://www.w3.org/2000/svg" class="pitch">`,
  );
  parts.push(
    `<defs><marker id="arrowhead" markerWidth="6" markerHeight="6" refX="5" refY="3" orient="auto">` +
      `<path d="M0,0 L6,3 L0,6 z"/></marker></defs>`,
  );
  parts.push(`<rect x="0" y="0" width="${L}" height="${W}" class="grass"/>`);
  parts.push(`<line x1="${L / 2}" y1="0" x2="${L / 2}" y2="${W}" class="chalk"/>`);
  parts.push(`<circle cx="${L / 2}" cy="${W / 2}" r="9.15" class="chalk-circle"/>`);
  for (const box of [0, 1]) {
    const x = box === 0 ? 0 : L - 16.5;
    parts.push(
      `<rect x="${x}" y="${W / 2 - 20.16}" width="16.5" height="40.32" class="chalk-box"/>`,
    );
  }
  // schematic opponent block on the +x half
  parts.push(
    `<rect x="${0.47 * L}" y="${0.18 * W}" width="${0.28 * L}" height="${0.64 * W}" class="block"/>`,
  );
  for (const a of arrows) {
    if (a.hidden) continue;
    parts.push(
      `<line x1="${a.from[0]}" y1="${a.from[1]}" x2="${a.to[0]}" y2="${a.to[1]}" ` +
        `stroke="${a.color}" stroke-width="1.4" marker-end="url(#arrowhead)" data-type="${a.type}"/>`,
    );
    const mx = (a.from[0] + a.to[0]) / 2;
    const my = (a.from[1] + a.to[1]) / 2 - 1.5;
    parts.push(
      `<text x="${mx}" y="${my}" class="freq" fill="${a.color}">${a.per30.toFixed(1)}</text>`,
    );
  }
  for (const m of markers) {
    const cls = m.selected ? "slot selected" : m.player ? "slot filled" : "slot";
    parts.push(`<g class="${cls}" data-label="${m.label}">`);
    parts.push(`<circle cx="${m.x}" cy="${m.y}" r="2.6"/>`);
    parts.push(
      `<text x="${m.x}" y="${m.y - 3.4}" class="slot-name">${m.player ?? m.label}</text>`,
    );
    parts.push(`</g>`);
  }
  parts.push("</svg>");
  return parts.join("");
}
