// Application wiring: DOM panel, service calls, viewport.

import { ApiError, createApi, latestWins } from './api.js'
import { cardHtml } from './details.js'
import { paintCaptions } from './labels.js'
import {
  STYLES,
  addRow,
  attributeChoices,
  configText,
  freeStyles,
  isLabelStyle,
  mappingChoices,
  removeRow,
} from './panel.js'
import { buildScene } from './scene-builder.js'
import type {
  AttributeSummary,
  Backdrop,
  MappingName,
  ModelSummary,
  StyleName,
  ViewerState,
} from './types.js'
import { createViewer } from './viewer.js'

const $ = <T extends HTMLElement>(id: string): T => {
  const element = document.getElementById(id)
  if (!element) throw new Error(`missing element #${id}`)
  return element as T
}

const api = createApi('')
const viewer = createViewer($('viewport'))
window.addEventListener('resize', () => viewer.resize())

// Backdrop starts on: the room gives fixed orientation references while
// navigating; flip it off for an uncluttered look.
const state: ViewerState = {
  modelId: null,
  summary: null,
  rows: [],
  backdrop: 'room',
  selectedNode: null,
}

const status = $('status')
const errorBanner = $('error-banner')
const card = $('detail-card')

function showError(message: string) {
  errorBanner.textContent = message
  errorBanner.hidden = false
}

function clearError() {
  errorBanner.hidden = true
}

function describeError(error: unknown): string {
  if (error instanceof ApiError) return `${error.status}: ${error.message}`
  return error instanceof Error ? error.message : String(error)
}

// ---------------------------------------------------------------- scene

const fetchScene = latestWins((modelId: string, config: string, backdrop: Backdrop) =>
  api.computeScene(modelId, config, backdrop),
)

async function refreshScene() {
  if (!state.modelId) return
  clearError()
  try {
    const payload = await fetchScene(state.modelId, configText(state.rows), state.backdrop)
    if (!payload) return // a newer request superseded this one
    const built = buildScene(payload)
    paintCaptions(built.captioned)
    viewer.show(built, payload.camera_hint)
    status.textContent =
      `${payload.name}: ${payload.elements.length} element(s), ` +
      `${payload.lanes.length} lane(s), legend ${payload.legend ? 'on' : 'off'}`
  } catch (error) {
    showError(describeError(error)) // keep the previous view
  }
}

viewer.onPick(async (pickId) => {
  if (!state.modelId) return
  state.selectedNode = pickId
  try {
    $('card-content').innerHTML = cardHtml(await api.getNodeDetails(state.modelId, pickId))
    card.hidden = false
  } catch (error) {
    showError(describeError(error))
  }
})

$('card-close').addEventListener('click', () => {
  card.hidden = true
  state.selectedNode = null
})

// ---------------------------------------------------------------- model

async function adoptModel(modelId: string, summary: ModelSummary) {
  state.modelId = modelId
  state.summary = summary
  state.rows = []
  state.selectedNode = null
  card.hidden = true
  renderRows()
  resetRowEditor()
  $('model-name').textContent = `${summary.name} (${summary.nodes} nodes, ${summary.tasks} tasks)`
  await refreshScene()
}

$<HTMLInputElement>('upload').addEventListener('change', async (event) => {
  const file = (event.target as HTMLInputElement).files?.[0]
  if (!file) return
  clearError()
  try {
    const response = await api.uploadModel(await file.text())
    for (const warning of response.warnings) {
      console.warn(`upload line ${warning.line}: ${warning.message}`)
    }
    await adoptModel(response.model_id, response.summary)
  } catch (error) {
    showError(describeError(error))
  }
})

$('generate').addEventListener('click', async () => {
  clearError()
  try {
    const response = await api.generateModel({
      nodes: Number($<HTMLInputElement>('gen-nodes').value),
      control_flow_elements: Number($<HTMLInputElement>('gen-cf').value),
      arguments: Number($<HTMLInputElement>('gen-args').value),
      seed: Number($<HTMLInputElement>('gen-seed').value),
    })
    await adoptModel(response.model_id, response.summary)
  } catch (error) {
    showError(describeError(error))
  }
})

$<HTMLSelectElement>('backdrop').addEventListener('change', async (event) => {
  state.backdrop = (event.target as HTMLSelectElement).value as Backdrop
  await refreshScene()
})

// ---------------------------------------------------------------- panel

const styleSelect = $<HTMLSelectElement>('row-style')
const attributeSelect = $<HTMLSelectElement>('row-attribute')
const mappingSelect = $<HTMLSelectElement>('row-mapping')
const lanesInput = $<HTMLInputElement>('row-lanes')

function fill(select: HTMLSelectElement, options: string[]) {
  select.innerHTML = ''
  for (const option of options) {
    const element = document.createElement('option')
    element.value = option
    element.textContent = option
    select.appendChild(element)
  }
}

function currentAttributes(): AttributeSummary[] {
  return attributeChoices(state.summary?.attributes ?? [])
}

function selectedKind(): AttributeSummary['kind'] {
  const attribute = currentAttributes().find((a) => a.name === attributeSelect.value)
  return attribute?.kind ?? 'text'
}

function resetRowEditor() {
  fill(styleSelect, freeStyles(state.rows))
  fill(attributeSelect, currentAttributes().map((a) => a.name))
  syncMappingChoices()
}

function syncMappingChoices() {
  const style = (styleSelect.value || STYLES[0]) as StyleName
  fill(mappingSelect, mappingChoices(style, selectedKind()))
  lanesInput.disabled = isLabelStyle(style)
}

styleSelect.addEventListener('change', syncMappingChoices)
attributeSelect.addEventListener('change', syncMappingChoices)

function renderRows() {
  const list = $('rows')
  list.innerHTML = ''
  for (const row of state.rows) {
    const item = document.createElement('li')
    const lanes = row.laneCount != null ? ` : ${row.laneCount}` : ''
    item.textContent = `${row.style} = ${row.attribute} : ${row.mapping}${lanes} `
    const remove = document.createElement('button')
    remove.textContent = 'x'
    remove.addEventListener('click', async () => {
      state.rows = removeRow(state.rows, row.style)
      renderRows()
      resetRowEditor()
      await refreshScene()
    })
    item.appendChild(remove)
    list.appendChild(item)
  }
}

$('row-add').addEventListener('click', async () => {
  if (!styleSelect.value || !attributeSelect.value) return
  clearError()
  try {
    state.rows = addRow(
      state.rows,
      {
        style: styleSelect.value as StyleName,
        attribute: attributeSelect.value,
        mapping: mappingSelect.value as MappingName,
        laneCount: lanesInput.value ? Number(lanesInput.value) : undefined,
      },
      selectedKind(),
    )
  } catch (error) {
    showError(describeError(error))
    return
  }
  lanesInput.value = ''
  renderRows()
  resetRowEditor()
  await refreshScene()
})

resetRowEditor()
