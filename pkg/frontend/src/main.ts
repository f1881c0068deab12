// Bootstraps the lineup explorer against the serving origin.

import { HttpServiceClient } from "./api.js";
import { mountApp } from "./ui.js";

const client = new HttpServiceClient("");

mountApp(document.getElementById("app") as HTMLElement, client).catch((err) => {
  const el = document.getElementById("app");
  if (el) {
    el.innerHTML = `<div class="banner error">service unreachable - <button id="boot-retry">retry</button></div>`;
    document.getElementById("boot-retry")?.addEventListener("click", () => {
      window.location.reload();
    });
  }
  console.error(err);
});
