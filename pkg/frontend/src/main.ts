// Bootstrap: wire the preset selector, JSON loader, and control buttons to
// the store, and re-render on every store change.

import { ApiClient } from './api.js';
import { renderApp } from './render.js';
import { SessionStore } from './store.js';
import type { QuiverPayload } from './types.js';

const client = new ApiClient('');
const store = new SessionStore(client);
const highlight = new Set<string>();

function root(): HTMLElement {
  return document.getElementById('app')!;
}

store.subscribe(() => {
  if (!store.pending) {
    highlight.clear(); // any completed state change invalidates the hint
  }
  renderApp(store, root(), highlight);
});

async function init(): Promise<void> {
  const select = document.getElementById('preset') as HTMLSelectElement;
  for (const name of await client.presets()) {
    const option = document.createElement('option');
    option.value = name;
    option.textContent = name;
    select.appendChild(option);
  }
  (document.getElementById('start') as HTMLButtonElement).addEventListener('click', () => {
    highlight.clear();
    void store.startPreset(select.value);
  });
  (document.getElementById('load-json') as HTMLButtonElement).addEventListener('click', () => {
    const text = (document.getElementById('quiver-json') as HTMLTextAreaElement).value;
    let quiver: QuiverPayload;
    try {
      quiver = JSON.parse(text) as QuiverPayload;
    } catch (err) {
      store.error = `invalid JSON: ${err}`;
      renderApp(store, root(), highlight);
      return;
    }
    highlight.clear();
    void store.startQuiver(quiver);
  });
  (document.getElementById('undo') as HTMLButtonElement).addEventListener('click', () => {
    highlight.clear();
    void store.undo();
  });
  (document.getElementById('ask-report') as HTMLButtonElement).addEventListener('click', () => {
    void store.fetchReport();
  });
  (document.getElementById('hint-green') as HTMLButtonElement).addEventListener('click', () => {
    highlight.clear();
    for (const id of store.hintGreen()) {
      highlight.add(id);
    }
    renderApp(store, root(), highlight);
  });
}

void init();
