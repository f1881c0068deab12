// Player profile panel: run-type arrows plus the reception-speed bars.

import { buildArrows, renderPitchSvg } from "./pitch.js";
import { Profile } from "./types.js";

const CATEGORIES = ["walking", "jogging", "running", "sprinting"];

export function receptionBars(profile: Profile): { category: string; share: number | null }[] {
  return CATEGORIES.map((category) => {
    const raw = profile[`reception_${category}_share`];
    return { category, share: raw === null || raw === undefined ? null : Number(raw) };
  });
}

export function renderProfilePanel(
  profile: Profile | null,
  movementTypes: string[],
  pitch: { length: number; width: number },
): string {
  if (profile === null) {
    return `<p class="hint">Select a filled slot to inspect the player's run profile.</p>`;
  }
  if (!profile.qualified) {
    return `<p class="warn">insufficient minutes: ${profile.player} has ` +
      `${Number(profile.minutes_total).toFixed(0)} min as ${profile.role} ` +
      `(qualification requires 450)</p>`;
  }
  const arrows = buildArrows(profile, movementTypes, pitch);
  const svg = renderPitchSvg([], arrows, pitch);
  const bars = receptionBars(profile)
    .map(({ category, share }) => {
      const pctWidth = share === null ? 0 : Math.round(share * 100);
      const label = share === null ? "n/a" : `${(share * 100).toFixed(0)}%`;
      return (
        `<div class="bar-row"><span class="bar-label">${category}</span>` +
        `<div class="bar"><div class="bar-fill" style="width:${pctWidth}%"></div></div>` +
        `<span class="bar-value">${label}</span></div>`
      );
    })
    .join("");
  return (
    `<h3>${profile.player} <small>(${profile.role})</small></h3>` +
    svg +
    `<h4>reception speed (2 s before)</h4>` +
    `<div class="bars">${bars}</div>`
  );
}
