import { describe, expect, it } from "vitest";

import { receptionBars, renderProfilePanel } from "../src/panel.js";
import { buildArrows, percentileColor, renderPitchSvg } from "../src/pitch.js";
import { Profile } from "../src/types.js";
import { MOVEMENT_TYPES } from "./stub.js";

const PITCH = { length: 105, width: 68 };

function profileWith(rates: Record<string, number>, percentiles: Record<string, number | null> = {}): Profile {
  const p: Profile = {
    player: "w1",
    role: "winger",
    qualified: true,
    minutes_total: 900,
  };
  for (const mt of MOVEMENT_TYPES) {
    p[`mt_${mt}_per30`] = rates[mt] ?? 0;
    p[`pct_${mt}`] = percentiles[mt] ?? null;
  }
  for (const c of ["walking", "jogging", "running", "sprinting"]) {
    p[`reception_${c}_share`] = 0.25;
  }
  return p;
}

describe("arrows", () => {
  it("zero-frequency arrows are hidden", () => {
    const arrows = buildArrows(
      profileWith({ inside_to_back: 3.0 }),
      MOVEMENT_TYPES,
      PITCH,
    );
    const visible = arrows.filter((a) => !a.hidden);
    expect(visible.map((a) => a.type)).toEqual(["inside_to_back"]);
    const svg = renderPitchSvg([], arrows, PITCH);
    expect(svg).toContain('data-type="inside_to_back"');
    expect(svg).not.toContain('data-type="wing_to_back"');
  });

  it("labels carry the served frequency", () => {
    const arrows = buildArrows(profileWith({ wing_to_back: 5.3 }), MOVEMENT_TYPES, PITCH);
    const arrow = arrows.find((a) => a.type === "wing_to_back")!;
    expect(arrow.per30).toBe(5.3);
    expect(renderPitchSvg([], arrows, PITCH)).toContain(">5.3</text>");
  });

  it("missing peer group renders the neutral color", () => {
    expect(percentileColor(null)).toBe("#8a8a8a");
    const low = percentileColor(0);
    const high = percentileColor(100);
    expect(low).not.toBe(high);
    const arrows = buildArrows(
      profileWith({ inside_to_back: 2.0 }, { inside_to_back: null }),
      MOVEMENT_TYPES,
      PITCH,
    );
    expect(arrows.find((a) => a.type === "inside_to_back")!.color).toBe("#8a8a8a");
  });
});

describe("profile panel", () => {
  it("unqualified player gets the insufficient-minutes state", () => {
    const p = profileWith({});
    p.qualified = false;
    p.minutes_total = 120;
    const html = renderProfilePanel(p, MOVEMENT_TYPES, PITCH);
    expect(html).toContain("insufficient minutes");
    expect(html).not.toContain("<svg");
  });

  it("qualified player renders arrows and reception bars", () => {
    const html = renderProfilePanel(
      profileWith({ inside_to_back: 3.0 }),
      MOVEMENT_TYPES,
      PITCH,
    );
    expect(html).toContain("<svg");
    expect(html).toContain("reception speed");
    const bars = receptionBars(profileWith({}));
    expect(bars).toHaveLength(4);
    expect(bars.every((b) => b.share === 0.25)).toBe(true);
  });
});
