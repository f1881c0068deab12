// DOM wiring: formation picker, slot pickers, delta panel, profile panel.

import { ServiceClient } from "./api.js";
import { renderProfilePanel } from "./panel.js";
import { buildArrows, renderPitchSvg, SlotMarker } from "./pitch.js";
import { LineupStore } from "./state.js";
import { Profile, RosterEntry, ServedConfig } from "./types.js";

export async function mountApp(root: HTMLElement, client: ServiceClient): Promise<void> {
  const config: ServedConfig = await client.config();
  const store = new LineupStore(client);
  const rosterByRole = new Map<string, RosterEntry[]>();
  for (const role of config.roles) {
    rosterByRole.set(role, await client.players(role));
  }

  let selectedSlot: number | null = null;
  let selectedProfile: Profile | null = null;

  root.innerHTML = `
    <header>
      <h1>Lineup explorer</h1>
      <label>formation
        <select id="formation"></select>
      </label>
      <button id="undo" disabled>undo</button>
    </header>
    <div class="banner offline" id="offline" hidden>
      service unreachable - <button id="retry">retry</button>
    </div>
    <div class="banner error" id="inline-error" hidden></div>
    <main>
      <section id="pitch-wrap"></section>
      <section id="side">
        <div id="slots"></div>
        <h3>per-30 movement totals</h3>
        <table id="totals"></table>
        <div id="profile-panel"></div>
      </section>
    </main>
  `;

  const formationSel = root.querySelector<HTMLSelectElement>("#formation")!;
  for (const t of config.templates) {
    const opt = document.createElement("option");
    opt.value = t.name;
    opt.textContent = t.name;
    formationSel.appendChild(opt);
  }
  formationSel.addEventListener("change", () => {
    const tpl = config.templates.find((t) => t.name === formationSel.value);
    if (tpl) store.setFormation(tpl);
  });

  root.querySelector("#undo")!.addEventListener("click", () => store.undo());
  root.querySelector("#retry")!.addEventListener("click", () => {
    void store.retry();
  });

  function renderSlots(): void {
    const wrap = root.querySelector("#slots")!;
    wrap.innerHTML = "";
    store.slots.forEach((slot, i) => {
      const row = document.createElement("div");
      row.className = "slot-row" + (selectedSlot === i ? " selected" : "");
      const label = document.createElement("span");
      label.textContent = `${slot.label} (${slot.role.replace(/_/g, " ")})`;
      label.addEventListener("click", () => {
        selectedSlot = i;
        void showProfile();
      });
      const sel = document.createElement("select");
      const empty = document.createElement("option");
      empty.value = "";
      empty.textContent = "-";
      sel.appendChild(empty);
      for (const entry of rosterByRole.get(slot.role) ?? []) {
        const opt = document.createElement("option");
        opt.value = entry.player;
        opt.textContent = entry.qualified
          ? entry.player
          : `${entry.player} (low minutes)`;
        if (slot.player === entry.player) opt.selected = true;
        sel.appendChild(opt);
      }
      sel.addEventListener("change", () => {
        void store.setPlayer(i, sel.value === "" ? null : sel.value);
      });
      row.append(label, sel);
      wrap.appendChild(row);
    });
  }

  function renderTotals(): void {
    const table = root.querySelector("#totals")!;
    if (store.totals === null) {
      table.innerHTML = `<tr><td class="hint">fill all eleven slots to compare</td></tr>`;
      return;
    }
    const rows = config.movement_types
      .map((mt) => {
        const total = store.totals![mt] ?? 0;
        const delta = store.deltas ? (store.deltas[mt] ?? 0) : 0;
        const cls = delta > 0 ? "up" : delta < 0 ? "down" : "";
        const from = (total - delta).toFixed(1);
        const deltaText =
          delta === 0 ? "" : ` <span class="${cls}">${from} → ${total.toFixed(1)}</span>`;
        return `<tr><td>${mt.replace(/_/g, " ")}</td><td>${total.toFixed(1)}</td><td>${deltaText}</td></tr>`;
      })
      .join("");
    table.innerHTML = `<tr><th>run type</th><th>per 30</th><th>change</th></tr>${rows}`;
  }

  function renderPitch(): void {
    const markers: SlotMarker[] = store.slots.map((s, i) => ({
      label: s.label,
      player: s.player,
      x: s.x,
      y: s.y,
      selected: selectedSlot === i,
    }));
    const arrows = selectedProfile
      ? buildArrows(selectedProfile, config.movement_types, config.pitch)
      : [];
    root.querySelector("#pitch-wrap")!.innerHTML = renderPitchSvg(
      markers,
      arrows,
      config.pitch,
    );
  }

  function renderBanners(): void {
    const offline = root.querySelector<HTMLElement>("#offline")!;
    offline.hidden = !store.offline;
    const err = root.querySelector<HTMLElement>("#inline-error")!;
    if (store.error) {
      const gaps = store.error.gaps
        .map((g) => `<li>${g.player} as ${g.role.replace(/_/g, " ")}: ${g.reason}</li>`)
        .join("");
      err.innerHTML = `${store.error.message}${gaps ? `<ul>${gaps}</ul>` : ""}`;
      err.hidden = false;
    } else {
      err.hidden = true;
    }
    root.querySelector<HTMLButtonElement>("#undo")!.disabled = store.undoDepth === 0;
  }

  async function showProfile(): Promise<void> {
    selectedProfile = null;
    if (selectedSlot !== null) {
      const slot = store.slots[selectedSlot];
      if (slot && slot.player) {
        try {
          selectedProfile = await client.profile(slot.player, slot.role);
        } catch {
          selectedProfile = null;
        }
      }
    }
    root.querySelector("#profile-panel")!.innerHTML = renderProfilePanel(
      selectedProfile,
      config.movement_types,
      config.pitch,
    );
    renderPitch();
    renderSlots();
  }

  store.onChange(() => {
    renderSlots();
    renderTotals();
    renderPitch();
    renderBanners();
  });

  const first = config.templates[0];
  if (first) store.setFormation(first);
}
